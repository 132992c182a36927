#include <doctest.h>

#include <cmath>

#include "concentra/deviation.hpp"
#include "concentra/estimators.hpp"
#include "concentra/special.hpp"

using namespace concentra;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("small deviation at t = 0 pins both sides at one half") {
  const RngStream rng(141);
  const auto rows = logconcave_smalldev_check(NormedSpace::euclidean(16),
                                              Measure::gaussian(16), {0.0}, 200000, rng);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].bound == doctest::Approx(0.5));
  CHECK(rows[0].p_hat == doctest::Approx(0.5).epsilon(0.01));
  CHECK(rows[0].pass);
}

TEST_CASE("small deviation rows pass for the cross-polytope gauge") {
  const RngStream rng(142);
  const auto rows = logconcave_smalldev_check(NormedSpace::lp(64, 1.0), Measure::gaussian(64),
                                              {2, 4, 8, 16, 32}, 400000, rng);
  for (const auto& row : rows) CHECK(row.pass);
}

TEST_CASE("uniform cube small deviation matches the exact power law") {
  const RngStream rng(143);
  // Under the uniform law on the cube, P(gauge <= (1-eps) median) is
  // exactly (1-eps)^n / 2.
  struct Case {
    Index n;
    double eps;
  };
  for (const Case c : {Case{3, 0.5}, Case{8, 0.25}}) {
    const NormedSpace cube = NormedSpace::lp(c.n, kInf);
    const SampleStats s = scalar_stats(
        Measure::uniform_cube(c.n), [&](const Vector& x) { return cube.gauge(x); }, 400000,
        rng.substream(static_cast<std::uint64_t>(c.n)));
    const double m = s.median();
    const double p_hat =
        static_cast<double>(s.count_below((1.0 - c.eps) * m)) / static_cast<double>(s.count());
    const double exact = 0.5 * std::pow(1.0 - c.eps, static_cast<double>(c.n));
    const double se = std::sqrt(exact * (1.0 - exact) / static_cast<double>(s.count()));
    CHECK(std::fabs(p_hat - exact) <= 3.0 * se);
  }
}

TEST_CASE("density at the median clears the positive-part reciprocal") {
  const RngStream rng(144);
  const DensityVerdict cube =
      density_lower_check(NormedSpace::lp(16, kInf), Measure::gaussian(16), 400000,
                          rng.substream(1));
  CHECK(cube.pass);
  // Against the exact density of the max-abs coordinate at the estimated
  // median, the inequality holds with no estimation tolerance at all.
  const double exact_density = 2.0 * 16.0 * normal_pdf(cube.median) *
                               std::pow(2.0 * normal_cdf(cube.median) - 1.0, 15.0);
  CHECK(32.0 * exact_density * cube.positive_part_mean >= 1.0);

  CHECK(density_lower_check(NormedSpace::euclidean(64), Measure::gaussian(64), 200000,
                            rng.substream(2))
            .pass);
  CHECK(density_lower_check(NormedSpace::lp(32, 1.0), Measure::exponential(32), 200000,
                            rng.substream(3))
            .pass);
}

TEST_CASE("small-ball bound with the dilation exponent") {
  const RngStream rng(145);
  const auto rows = small_ball_check(NormedSpace::lp(16, kInf), Measure::gaussian(16),
                                     {0.3, 0.5, 0.7}, 400000, rng.substream(1));
  for (const auto& row : rows) CHECK(row.pass);

  // Exact arithmetic for the cube: left side (2 Phi(eps m) - 1)^n against
  // (1/2) eps^{2 theta} with theta = m f(m) from the closed-form density.
  const Index n = 16;
  const double m = normal_quantile(0.5 * (1.0 + std::pow(0.5, 1.0 / 16.0)));
  const double theta = m * 2.0 * n * normal_pdf(m) * std::pow(2.0 * normal_cdf(m) - 1.0, 15.0);
  for (double eps : {0.3, 0.5, 0.7}) {
    const double lhs = std::pow(2.0 * normal_cdf(eps * m) - 1.0, 16.0);
    const double rhs = 0.5 * std::pow(eps, 2.0 * theta);
    CHECK(lhs <= rhs);
  }

  const auto exp_rows = small_ball_check(NormedSpace::lp(256, kInf), Measure::exponential(256),
                                         {0.3, 0.5, 0.7}, 200000, rng.substream(2));
  for (const auto& row : exp_rows) CHECK(row.pass);
}

TEST_CASE("small-ball near eps = 1 degrades gracefully to one half") {
  const RngStream rng(146);
  const auto rows = small_ball_check(NormedSpace::euclidean(16), Measure::gaussian(16), {0.99},
                                     400000, rng);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].p_hat == doctest::Approx(0.5).epsilon(0.05));
  CHECK(rows[0].pass);
}

TEST_CASE("small-ball rejects unlicensed measures") {
  const RngStream rng(147);
  CHECK_THROWS_AS(small_ball_check(NormedSpace::lp(4, kInf), Measure::uniform_cube(4), {0.5},
                                   1000, rng),
                  ConfigError);
}

TEST_CASE("upper tail bound from the cdf ratio") {
  const RngStream rng(148);
  const auto rows = borell_check(NormedSpace::lp(32, 1.0), Measure::gaussian(32), 1.1,
                                 {1.5, 2.0, 3.0}, 400000, rng.substream(1));
  for (const auto& row : rows) CHECK(row.pass);

  // At t = s the bound collapses to 1 - F(s) exactly.
  const double fs = 0.8;
  CHECK(fs * std::pow((1.0 - fs) / fs, 1.0) == doctest::Approx(1.0 - fs));

  // Uniform cube against its own gauge has cdf t^n; verify the empirical
  // tail against the closed form.
  const NormedSpace cube = NormedSpace::lp(8, kInf);
  const SampleStats s = scalar_stats(
      Measure::uniform_cube(8), [&](const Vector& x) { return cube.gauge(x); }, 400000,
      rng.substream(2));
  for (double t : {0.7, 0.9}) {
    const double exact = 1.0 - std::pow(t, 8.0);
    const double p_hat = 1.0 - s.cdf(t);
    CHECK(std::fabs(p_hat - exact) <=
          3.0 * std::sqrt(exact * (1.0 - exact) / static_cast<double>(s.count())));
  }
}

TEST_CASE("log-concavity profile of gaussian and uniform-cube laws") {
  const RngStream rng(149);
  const std::vector<double> grid = {0.6, 0.8, 1.0, 1.2, 1.4};
  CHECK(logconcavity_profile(NormedSpace::euclidean(32), Measure::gaussian(32), grid, 200000,
                             rng.substream(1))
            .pass);
  CHECK(logconcavity_profile(NormedSpace::lp(16, kInf), Measure::gaussian(16), grid, 200000,
                             rng.substream(2))
            .pass);

  // For the cube gauge under its own uniform law, log F = n log t, so the
  // second differences on this grid are strictly negative.
  const CdfProfile cube = logconcavity_profile(NormedSpace::lp(8, kInf),
                                               Measure::uniform_cube(8), grid, 200000,
                                               rng.substream(3));
  CHECK(cube.pass);
  for (double d : cube.second_diff) CHECK(d < 0.0);
}

TEST_CASE("two-sided seminorm inequality on the cube gauge") {
  const RngStream rng(150);
  const std::vector<std::array<double, 3>> grid = {
      {1.2, 0.8, 0.3}, {1.5, 1.0, 0.5}, {2.0, 0.5, 0.25}};
  const auto rows =
      seminorm_logconcavity_check(NormedSpace::lp(16, kInf), Measure::gaussian(16), grid,
                                  400000, rng);
  for (const auto& row : rows) CHECK(row.pass);

  // Exact verification through F(s) = (2 Phi(s) - 1)^n at the first triple.
  const Index n = 16;
  const double m = normal_quantile(0.5 * (1.0 + std::pow(0.5, 1.0 / 16.0)));
  const auto F = [&](double t) { return std::pow(2.0 * normal_cdf(t) - 1.0, 16.0); };
  for (const auto& [tm, sm, lambda] : grid) {
    const double t = tm * m, s = sm * m;
    const double lhs = 1.0 - F((1.0 - lambda) * t - lambda * s);
    const double rhs = std::pow(1.0 - F(t), 1.0 - lambda) * std::pow(F(s), lambda);
    CHECK(lhs >= rhs - 1e-12);
  }
  (void)n;
}

TEST_CASE("theta under the gaussian never outruns sqrt(n) by much") {
  // The sqrt(n) ceiling holds with an unpinned constant; 5 is harness
  // slack and an excess is reported rather than failed.
  const RngStream rng(160);
  int idx = 0;
  for (Index n : {Index(64), Index(256)}) {
    for (const NormedSpace& x :
         {NormedSpace::euclidean(n), NormedSpace::lp(n, 1.0), NormedSpace::lp(n, kInf),
          NormedSpace::abs_plus_linf(n), NormedSpace::abs_plus_lq(n, 5.0)}) {
      const ThetaEstimate t =
          theta_parameter(x, Measure::gaussian(n), 100000, rng.substream(idx++));
      const double ratio = t.theta.value / std::sqrt(static_cast<double>(n));
      MESSAGE(x.label(), ": theta/sqrt(n) = ", ratio);
      WARN(ratio <= 5.0);
    }
  }
}

TEST_CASE("transport tail for a linear functional matches the normal law") {
  const RngStream rng(151);
  const Measure g = Measure::gaussian(8);
  const Vector e1 = Vector::Unit(8, 0);
  const auto rows = transport_tail_rows(
      g, [&](const Vector& z) { return e1.dot(z); },
      [&](const Vector&) { return e1; }, {0.5, 1.0, 2.0}, 400000, rng);
  for (const auto& row : rows) {
    CHECK(row.pass);
    const double exact = normal_cdf(-row.parameter);
    CHECK(std::fabs(row.p_hat - exact) <=
          3.0 * std::sqrt(exact * (1.0 - exact) / static_cast<double>(row.trials)) + 1e-3);
    CHECK(exact <= std::exp(-row.parameter * row.parameter / 2.0));
  }
}

TEST_CASE("transport tails for the l1 and sup gauges") {
  const RngStream rng(152);
  const auto l1 = transport_tail_check(NormedSpace::lp(64, 1.0), {1.0, 2.0, 3.0}, 400000,
                                       rng.substream(1));
  for (const auto& row : l1) CHECK(row.pass);
  const auto linf = transport_tail_check(NormedSpace::lp(256, kInf), {1.0, 2.0, 3.0}, 200000,
                                         rng.substream(2));
  for (const auto& row : linf) CHECK(row.pass);
}

TEST_CASE("transport derivative: exponential scalar is the identity map") {
  const RngStream rng(153);
  const TransportDerivative t =
      transport_derivative_probe(NormedSpace::lp(1, 1.0), Measure::exponential(1), 400000,
                                 rng.substream(1));
  CHECK(t.derivative == doctest::Approx(1.0).epsilon(0.1));
  CHECK(t.ratio == doctest::Approx(std::log(2.0)).epsilon(0.1));
  CHECK(t.pass);

  CHECK(transport_derivative_probe(NormedSpace::euclidean(64), Measure::gaussian(64), 200000,
                                   rng.substream(2))
            .pass);
  CHECK(transport_derivative_probe(NormedSpace::lp(256, kInf), Measure::gaussian(256), 200000,
                                   rng.substream(3))
            .pass);
}

TEST_CASE("exponential norm profile: exact first moments at p = 1") {
  const RngStream rng(154);
  const auto rows = exponential_norm_profile(1.0, {64, 256}, 200000, rng);
  for (const auto& row : rows) {
    const double nd = static_cast<double>(row.n);
    CHECK(row.mean / nd == doctest::Approx(1.0).epsilon(0.01));
    CHECK(row.variance / nd == doctest::Approx(1.0).epsilon(0.05));
  }
}

TEST_CASE("exponential norm diagnostics are flat across dimension") {
  const RngStream rng(155);
  std::uint64_t idx = 0;
  for (double p : {2.0, kInf}) {
    const auto rows =
        exponential_norm_profile(p, {256, 1024, 4096}, 50000, rng.substream(idx++));
    double lo = kInf, hi = 0.0, mlo = kInf, mhi = 0.0;
    for (const auto& row : rows) {
      lo = std::min(lo, row.var_diag);
      hi = std::max(hi, row.var_diag);
      mlo = std::min(mlo, row.mean_diag);
      mhi = std::max(mhi, row.mean_diag);
    }
    CHECK(hi / lo <= 1.4);
    CHECK(mhi / mlo <= 1.4);
  }
}

TEST_CASE("fifth-power norms converge toward their variance asymptote") {
  // |w|^5 summands are far from the CLT at n = 256, so the variance
  // diagnostic still climbs on this n range; the mean diagnostic is
  // already flat and the variance increments must shrink.
  const RngStream rng(156);
  const auto rows = exponential_norm_profile(5.0, {256, 1024, 4096}, 50000, rng);
  REQUIRE(rows.size() == 3);
  CHECK(rows[2].mean_diag / rows[0].mean_diag <= 1.4);
  CHECK(rows[1].var_diag > rows[0].var_diag);
  CHECK(rows[2].var_diag > rows[1].var_diag);
  CHECK(rows[2].var_diag / rows[1].var_diag < rows[1].var_diag / rows[0].var_diag);
}
