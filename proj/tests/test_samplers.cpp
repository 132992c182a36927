#include <doctest.h>

#include <cmath>

#include "concentra/samplers.hpp"
#include "support/oracles.hpp"

using namespace concentra;

TEST_CASE("sampling is reproducible for a fixed seed") {
  RngStream a(42), b(42);
  const Vector x = sample(Measure::gaussian(2), a);
  const Vector y = sample(Measure::gaussian(2), b);
  CHECK(x == y);

  RngStream c(43), d(43);
  CHECK(gaussian_matrix(4, 16, c) == gaussian_matrix(4, 16, d));

  RngStream e(44), f(44);
  CHECK(haar_grassmann(8, 3, e).basis() == haar_grassmann(8, 3, f).basis());
}

TEST_CASE("sphere samples are normalized") {
  RngStream rng(45);
  const Measure m = Measure::sphere(6);
  for (int i = 0; i < 1000; ++i) CHECK(std::fabs(sample(m, rng).norm() - 1.0) < 1e-12);
}

TEST_CASE("gaussian coordinates pass the standardization gate") {
  RngStream rng(46);
  const Measure m = Measure::gaussian(4);
  const std::size_t draws = 250000;  // one million coordinates
  double sum = 0.0, sum2 = 0.0;
  Vector z(4);
  for (std::size_t i = 0; i < draws; ++i) {
    sample_into(m, rng, z);
    sum += z.sum();
    sum2 += z.squaredNorm();
  }
  const double n = static_cast<double>(4 * draws);
  CHECK(std::fabs(sum / n) < 0.01);
  CHECK(std::fabs(sum2 / n - (sum / n) * (sum / n) - 1.0) < 0.02);
}

TEST_CASE("gaussian isotropy along a random direction") {
  RngStream rng(47);
  const Vector u = rng.sphere_point(16);
  const Measure m = Measure::gaussian(16);
  double s = 0.0, s2 = 0.0;
  const std::size_t draws = 1000000;
  Vector z(16);
  for (std::size_t i = 0; i < draws; ++i) {
    sample_into(m, rng, z);
    const double v = u.dot(z);
    s += v;
    s2 += v * v;
  }
  const double mean = s / draws;
  CHECK(std::fabs(s2 / draws - mean * mean - 1.0) < 0.02);
}

TEST_CASE("exponential marginals have the right first moments") {
  RngStream rng(48);
  const Measure m = Measure::exponential(8);
  double s_abs = 0.0, s_sq = 0.0;
  const std::size_t draws = 125000;  // one million coordinates
  Vector w(8);
  for (std::size_t i = 0; i < draws; ++i) {
    sample_into(m, rng, w);
    s_abs += w.cwiseAbs().sum();
    s_sq += w.squaredNorm();
  }
  const double n = static_cast<double>(8 * draws);
  CHECK(std::fabs(s_abs / n - 1.0) < 0.01);
  CHECK(std::fabs(s_sq / n - 2.0) < 0.05);
}

TEST_CASE("uniform ball samples stay inside and fill the volume") {
  RngStream rng(49);
  const Measure m = Measure::uniform_lp_ball(3, 2.0);
  const std::size_t draws = 100000;
  std::size_t inside_half = 0;
  Vector x(3);
  for (std::size_t i = 0; i < draws; ++i) {
    sample_into(m, rng, x);
    CHECK(x.norm() <= 1.0 + 1e-12);
    if (x.norm() <= 0.5) ++inside_half;
  }
  // Volume ratio (1/2)^3 = 0.125; allow three binomial standard errors.
  const double p = static_cast<double>(inside_half) / draws;
  const double se = std::sqrt(0.125 * 0.875 / draws);
  CHECK(std::fabs(p - 0.125) <= 3.0 * se);
}

TEST_CASE("uniform cross-polytope samples have symmetric orthants") {
  RngStream rng(50);
  const Measure m = Measure::uniform_lp_ball(2, 1.0);
  const std::size_t draws = 100000;
  std::size_t first_orthant = 0;
  Vector x(2);
  for (std::size_t i = 0; i < draws; ++i) {
    sample_into(m, rng, x);
    CHECK(x.cwiseAbs().sum() <= 1.0 + 1e-12);
    if (x(0) > 0.0 && x(1) > 0.0) ++first_orthant;
  }
  const double p = static_cast<double>(first_orthant) / draws;
  const double se = std::sqrt(0.25 * 0.75 / draws);
  CHECK(std::fabs(p - 0.25) <= 3.0 * se);
}

TEST_CASE("cube samples are coordinatewise uniform") {
  RngStream rng(51);
  const Measure m = Measure::uniform_cube(4);
  double s = 0.0, s2 = 0.0;
  const std::size_t draws = 250000;
  Vector x(4);
  for (std::size_t i = 0; i < draws; ++i) {
    sample_into(m, rng, x);
    CHECK(x.cwiseAbs().maxCoeff() <= 1.0);
    s += x.sum();
    s2 += x.squaredNorm();
  }
  const double n = static_cast<double>(4 * draws);
  CHECK(std::fabs(s / n) < 0.005);
  CHECK(std::fabs(s2 / n - 1.0 / 3.0) < 0.005);  // Var U[-1,1] = 1/3
}

TEST_CASE("gaussian matrix entries pass the CLT gate") {
  RngStream rng(52);
  double sum = 0.0;
  const int matrices = 10000;
  for (int i = 0; i < matrices; ++i) sum += gaussian_matrix(4, 16, rng).sum();
  const double mean = sum / (matrices * 64.0);
  CHECK(std::fabs(mean) < 0.01);
}

TEST_CASE("random line angles in the plane are uniform") {
  RngStream rng(53);
  const int bins = 20;
  const std::size_t draws = 100000;
  std::vector<std::size_t> counts(bins, 0);
  for (std::size_t i = 0; i < draws; ++i) {
    const Subspace f = haar_grassmann(2, 1, rng);
    double angle = std::atan2(f.basis()(0, 1), f.basis()(0, 0));
    if (angle < 0.0) angle += M_PI;            // lines are sign-free
    if (angle >= M_PI) angle -= M_PI;
    const int b = std::min(bins - 1, static_cast<int>(angle / M_PI * bins));
    ++counts[b];
  }
  double chi2 = 0.0;
  const double expected = static_cast<double>(draws) / bins;
  for (int b = 0; b < bins; ++b) {
    const double d = static_cast<double>(counts[b]) - expected;
    chi2 += d * d / expected;
  }
  CHECK(chi2 < oracles::kChi2Crit1pct19);
}

TEST_CASE("projected coordinate vector has mean square k/n") {
  RngStream rng(54);
  const Index n = 8, k = 2;
  Vector e1 = Vector::Zero(n);
  e1(0) = 1.0;
  double s = 0.0, s2 = 0.0;
  const std::size_t draws = 100000;
  for (std::size_t i = 0; i < draws; ++i) {
    const Subspace f = haar_grassmann(n, k, rng);
    const double v = f.project(e1).squaredNorm();
    s += v;
    s2 += v * v;
  }
  const double mean = s / draws;
  const double se = std::sqrt((s2 / draws - mean * mean) / draws);
  CHECK(std::fabs(mean - 0.25) <= 3.0 * se);
}

TEST_CASE("subspace sampling rejects full and empty dimensions") {
  RngStream rng(55);
  CHECK_THROWS_AS(haar_grassmann(8, 8, rng), DimensionMismatch);
  CHECK_THROWS_AS(haar_grassmann(8, 0, rng), DimensionMismatch);
}

TEST_CASE("measure strings parse") {
  CHECK(parse_measure("gaussian", 5).kind == Measure::Kind::Gaussian);
  CHECK(parse_measure("exponential", 5).kind == Measure::Kind::Exponential);
  CHECK(parse_measure("sphere", 5).kind == Measure::Kind::SphereUniform);
  CHECK(parse_measure("uniform-cube", 5).kind == Measure::Kind::UniformCube);
  const Measure b = parse_measure("uniform-ball:p=1", 5);
  CHECK(b.kind == Measure::Kind::UniformLpBall);
  CHECK(b.p == doctest::Approx(1.0));
  CHECK(parse_measure("uniform-ball:p=inf", 5).kind == Measure::Kind::UniformCube);
  CHECK_THROWS_AS(parse_measure("levy", 5), ConfigError);
  CHECK_THROWS_AS(parse_measure("uniform-ball:p=0.3", 5), ConfigError);
}
