#include <doctest.h>

#include <cmath>
#include <vector>

#include "concentra/rng.hpp"

using namespace concentra;

TEST_CASE("same seed and stream replay bit-identically") {
  RngStream a(42, 7), b(42, 7);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());

  RngStream c(42, 7);
  std::vector<double> first;
  for (int i = 0; i < 100; ++i) first.push_back(c.normal());
  RngStream d(42, 7);
  for (int i = 0; i < 100; ++i) CHECK(d.normal() == first[i]);
}

TEST_CASE("distinct streams and substreams differ") {
  RngStream a(42, 0), b(42, 1);
  int equal = 0;
  for (int i = 0; i < 64; ++i) equal += a.next_u64() == b.next_u64();
  CHECK(equal == 0);

  RngStream parent(9);
  RngStream s0 = parent.substream(0);
  RngStream s1 = parent.substream(1);
  CHECK(s0.next_u64() != s1.next_u64());
  // Substream derivation is pure: the same index yields the same stream.
  CHECK(parent.substream(0).next_u64() == RngStream(9).substream(0).next_u64());
}

TEST_CASE("uniform lies in [0,1) and uniform_open in (0,1]") {
  RngStream r(1);
  for (int i = 0; i < 10000; ++i) {
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double v = r.uniform_open();
    CHECK(v > 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("normal moments pass the standardization gate") {
  RngStream r(3);
  const std::size_t n = 1000000;
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t i = 0; i < n / 2; ++i) {
    double a, b;
    r.normal_pair(a, b);
    sum += a + b;
    sum2 += a * a + b * b;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::fabs(mean) < 0.01);
  CHECK(std::fabs(var - 1.0) < 0.02);
}

TEST_CASE("exponential and laplace first moments") {
  RngStream r(4);
  const std::size_t n = 1000000;
  double se = 0.0, sl = 0.0, sl2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    se += r.exponential();
    const double w = r.laplace();
    sl += std::fabs(w);
    sl2 += w * w;
  }
  CHECK(std::fabs(se / n - 1.0) < 0.01);
  CHECK(std::fabs(sl / n - 1.0) < 0.01);   // E|w| = 1
  CHECK(std::fabs(sl2 / n - 2.0) < 0.05);  // E w^2 = 2
}

TEST_CASE("gamma sampler matches its mean and variance") {
  RngStream r(5);
  for (double shape : {0.25, 0.5, 1.0, 2.3}) {
    const std::size_t n = 200000;
    double s = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double g = r.gamma(shape);
      s += g;
      s2 += g * g;
    }
    const double mean = s / n;
    const double var = s2 / n - mean * mean;
    // Gamma(shape, 1) has mean and variance both equal to shape.
    CHECK(std::fabs(mean - shape) < 6.0 * std::sqrt(shape / n));
    CHECK(std::fabs(var - shape) < 0.05 * shape + 0.01);
  }
}

TEST_CASE("sphere points are unit vectors") {
  RngStream r(6);
  for (int n : {1, 2, 7}) {
    for (int i = 0; i < 100; ++i) {
      const Eigen::VectorXd v = r.sphere_point(n);
      CHECK(std::fabs(v.norm() - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("one-dimensional sphere points are signs") {
  RngStream r(7);
  bool plus = false, minus = false;
  for (int i = 0; i < 64; ++i) {
    const double v = r.sphere_point(1)[0];
    CHECK(std::fabs(std::fabs(v) - 1.0) < 1e-15);
    plus = plus || v > 0;
    minus = minus || v < 0;
  }
  CHECK(plus);
  CHECK(minus);
}
