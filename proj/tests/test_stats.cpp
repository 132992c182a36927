#include <doctest.h>

#include <cmath>
#include <vector>

#include "concentra/rng.hpp"
#include "concentra/special.hpp"
#include "concentra/stats.hpp"

using namespace concentra;

namespace {

// Brute-force central moments, the oracle for the streaming accumulator.
struct DirectMoments {
  double mean = 0, m2 = 0, m3 = 0, m4 = 0;
};

DirectMoments direct_moments(const std::vector<double>& xs) {
  DirectMoments d;
  for (double x : xs) d.mean += x;
  d.mean /= static_cast<double>(xs.size());
  for (double x : xs) {
    const double c = x - d.mean;
    d.m2 += c * c;
    d.m3 += c * c * c;
    d.m4 += c * c * c * c;
  }
  return d;
}

std::vector<double> random_values(std::size_t n, std::uint64_t seed) {
  RngStream r(seed);
  std::vector<double> xs(n);
  for (auto& x : xs) x = 3.0 + 2.0 * r.normal() + r.uniform();
  return xs;
}

}  // namespace

TEST_CASE("streaming moments match the direct computation") {
  const auto xs = random_values(5000, 11);
  SampleStats s;
  for (double x : xs) s.add(x);
  const DirectMoments d = direct_moments(xs);
  CHECK(s.mean() == doctest::Approx(d.mean).epsilon(1e-12));
  CHECK(s.moment2() * xs.size() == doctest::Approx(d.m2).epsilon(1e-9));
  CHECK(s.moment3() * xs.size() == doctest::Approx(d.m3).epsilon(1e-8));
  CHECK(s.moment4() * xs.size() == doctest::Approx(d.m4).epsilon(1e-8));
}

TEST_CASE("merge order reproduces the single pass") {
  const auto xs = random_values(4321, 12);
  SampleStats whole;
  for (double x : xs) whole.add(x);

  SampleStats a, b, c;
  for (std::size_t i = 0; i < xs.size(); ++i) (i < 1000 ? a : i < 2500 ? b : c).add(xs[i]);
  SampleStats merged = a;
  merged.merge(b);
  merged.merge(c);

  CHECK(merged.count() == whole.count());
  CHECK(merged.mean() == doctest::Approx(whole.mean()).epsilon(1e-13));
  CHECK(merged.variance() == doctest::Approx(whole.variance()).epsilon(1e-11));
  CHECK(merged.moment3() == doctest::Approx(whole.moment3()).epsilon(1e-9));
  CHECK(merged.moment4() == doctest::Approx(whole.moment4()).epsilon(1e-9));
  CHECK(merged.median() == whole.median());
}

TEST_CASE("quantiles and cdf are exact order statistics") {
  SampleStats s;
  for (double x : {5.0, 1.0, 3.0, 2.0, 4.0}) s.add(x);
  CHECK(s.median() == 3.0);
  CHECK(s.quantile(0.0) == 1.0);
  CHECK(s.quantile(1.0) == 5.0);
  CHECK(s.quantile(0.25) == 2.0);
  CHECK(s.cdf(3.0) == doctest::Approx(0.6));
  CHECK(s.cdf(0.5) == 0.0);
  CHECK(s.cdf(5.0) == 1.0);
  CHECK(s.count_below(3.0) == 2);

  SampleStats even;
  for (double x : {1.0, 2.0, 3.0, 4.0}) even.add(x);
  CHECK(even.median() == doctest::Approx(2.5));
}

TEST_CASE("clopper-pearson reproduces reference intervals") {
  // Reference values computed from the exact Beta quantile definition.
  const BinomialCI ci = clopper_pearson(8, 10);
  CHECK(ci.lower == doctest::Approx(0.4439045).epsilon(1e-4));
  CHECK(ci.upper == doctest::Approx(0.9747893).epsilon(1e-4));

  const BinomialCI zero = clopper_pearson(0, 10);
  CHECK(zero.lower == 0.0);
  CHECK(zero.upper == doctest::Approx(1.0 - std::pow(0.025, 0.1)).epsilon(1e-6));

  const BinomialCI full = clopper_pearson(10, 10);
  CHECK(full.upper == 1.0);
  CHECK(full.lower == doctest::Approx(std::pow(0.025, 0.1)).epsilon(1e-6));
}

TEST_CASE("incomplete beta and the normal cdf agree with closed forms") {
  for (double x : {0.1, 0.37, 0.5, 0.93}) {
    CHECK(regularized_ibeta(1.0, 1.0, x) == doctest::Approx(x).epsilon(1e-12));
    CHECK(regularized_ibeta(2.0, 2.0, x) ==
          doctest::Approx(3.0 * x * x - 2.0 * x * x * x).epsilon(1e-12));
    CHECK(regularized_ibeta_inv(2.0, 2.0, regularized_ibeta(2.0, 2.0, x)) ==
          doctest::Approx(x).epsilon(1e-10));
  }
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5));
  CHECK(normal_cdf(1.0) == doctest::Approx(0.8413447460685429).epsilon(1e-12));
  CHECK(normal_quantile(0.8413447460685429) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("gaussian l2 moments from log-gamma") {
  CHECK(gaussian_l2_mean(1) == doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(1e-13));
  CHECK(gaussian_l2_moment(3, 2.0) == doctest::Approx(3.0).epsilon(1e-12));
  // E ||Z||_2^{-1} in dimension 3 is sqrt(2/pi).
  CHECK(gaussian_l2_moment(3, -1.0) == doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(1e-12));
}

TEST_CASE("two-sample ks statistic separates shifted samples") {
  RngStream r(13);
  std::vector<double> a(20000), b(20000), c(20000);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = r.normal();
    b[i] = r.normal();
    c[i] = r.normal() + 0.5;
  }
  CHECK(ks_two_sample(a, b) < 0.02);
  CHECK(ks_two_sample(a, c) > 0.1);
}

TEST_CASE("tail estimate carries its exact interval") {
  const TailEstimate t = TailEstimate::from_counts(1.5, 30, 1000);
  CHECK(t.p_hat == doctest::Approx(0.03));
  CHECK(t.ci.lower < 0.03);
  CHECK(t.ci.upper > 0.03);
  CHECK(t.ci.lower > 0.0);
  CHECK(t.ci.upper < 0.07);
}
