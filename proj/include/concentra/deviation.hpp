#pragma once

#include <array>
#include <limits>
#include <vector>

#include "concentra/bodies.hpp"
#include "concentra/samplers.hpp"
#include "concentra/stats.hpp"

namespace concentra {

/// One asserted inequality row: an event probability against an explicit
/// bound. The row passes when the lower Clopper-Pearson limit of the
/// empirical probability does not exceed the bound; alpha is
/// Bonferroni-adjusted across the rows of a table by the caller.
struct InequalityRow {
  double parameter = 0.0;  // t, eps, or the grid point
  std::size_t events = 0;
  std::size_t trials = 0;
  double p_hat = 0.0;
  BinomialCI ci{0.0, 1.0};
  double bound = 0.0;
  bool pass = false;
  /// Report-only: the constant c that would make (1/2) exp(-c t^2) equal
  /// the observed probability; NaN when the row has no events or no t.
  double implied_c = std::numeric_limits<double>::quiet_NaN();
};

/// Lower deviation of the gauge below its median in units of the mean
/// absolute deviation: P(||Z|| < m - t D) against (1/2) e^{-t/16}.
std::vector<InequalityRow> logconcave_smalldev_check(const NormedSpace& x, const Measure& mu,
                                                     const std::vector<double>& t_grid,
                                                     std::size_t n_samples,
                                                     const RngStream& rng);

/// Density of the gauge at its median against the reciprocal of the
/// positive-part mean deviation: 32 f(m) E(||Z|| - m)_+ >= 1, allowing the
/// stated density-estimation tolerance.
struct DensityVerdict {
  double median = 0.0;
  double density = 0.0;
  double positive_part_mean = 0.0;
  double product = 0.0;  // 32 * density * positive_part_mean
  double tolerance = 0.15;
  bool pass = false;
};

DensityVerdict density_lower_check(const NormedSpace& x, const Measure& mu,
                                   std::size_t n_samples, const RngStream& rng);

/// Dilation small-ball bound P(||Z|| <= eps m) <= (1/2) eps^{2 m f(m)}.
/// Only the Gaussian and symmetric-exponential product measures are
/// accepted (the dilation argument needs the B-property of the pair).
std::vector<InequalityRow> small_ball_check(const NormedSpace& x, const Measure& mu,
                                            const std::vector<double>& eps_grid,
                                            std::size_t n_samples, const RngStream& rng);

/// Upper-tail bound from log-concavity of the CDF:
/// 1 - F(t) <= F(s) ((1 - F(s))/F(s))^{(t+s)/(2s)} for t > s.
/// s and the t grid are given as multiples of the estimated median.
std::vector<InequalityRow> borell_check(const NormedSpace& x, const Measure& mu, double s_mult,
                                        const std::vector<double>& t_mults,
                                        std::size_t n_samples, const RngStream& rng);

/// Empirical CDF of the gauge on a grid of median multiples with the
/// discrete second difference of log F; log-concavity predicts the second
/// differences stay below their noise band.
struct CdfProfile {
  std::vector<double> grid;
  std::vector<double> cdf;
  std::vector<double> log_cdf;
  std::vector<double> second_diff;  // interior points
  std::vector<double> noise_band;   // 3 x delta-method SE
  bool pass = false;
};

CdfProfile logconcavity_profile(const NormedSpace& x, const Measure& mu,
                                const std::vector<double>& grid_mults, std::size_t n_samples,
                                const RngStream& rng);

/// Seminorm two-sided log-concavity spot check at (t, s, lambda) triples
/// given in median multiples: 1 - F((1-l)t - l s) >= (1-F(t))^{1-l} F(s)^l.
struct SeminormCheckRow {
  double t = 0.0, s = 0.0, lambda = 0.0;
  double lhs = 0.0, rhs = 0.0;
  double lhs_upper = 0.0;  // upper CP limit of the left side
  double rhs_slack = 0.0;  // 3 x delta-method SE of the right side
  bool pass = false;
};

std::vector<SeminormCheckRow> seminorm_logconcavity_check(
    const NormedSpace& x, const Measure& mu,
    const std::vector<std::array<double, 3>>& tsl_grid, std::size_t n_samples,
    const RngStream& rng);

/// Lower-tail transport bound under the Gaussian measure:
/// P(f(Z) - E f <= -t (E ||grad f||^2)^{1/2}) <= e^{-t^2/2}; the quadratic
/// transport constant is instantiated at rho = 2.
std::vector<InequalityRow> transport_tail_check(const NormedSpace& x,
                                                const std::vector<double>& t_grid,
                                                std::size_t n_samples, const RngStream& rng);

/// Same inequality for an arbitrary convex function with known gradient;
/// the gauge-based check above forwards here.
std::vector<InequalityRow> transport_tail_rows(
    const Measure& mu, const std::function<double(const Vector&)>& f,
    const std::function<Vector(const Vector&)>& grad_f, const std::vector<double>& t_grid,
    std::size_t n_samples, const RngStream& rng);

/// Finite-difference derivative at the median of the transport map that
/// pushes the law of the gauge to the symmetric exponential, and its
/// product with the mean absolute deviation. The product has a harness
/// floor of 0.02.
struct TransportDerivative {
  double median = 0.0;
  double derivative = 0.0;
  double abs_dev_mean = 0.0;
  double ratio = 0.0;
  bool pass = false;
};

TransportDerivative transport_derivative_probe(const NormedSpace& x, const Measure& mu,
                                               std::size_t n_samples, const RngStream& rng);

/// Mean/variance profile of ||W||_p under the symmetric exponential product
/// law across dimensions, with the scaling diagnostics that should be flat
/// in n.
struct ExpNormRow {
  Index n = 0;
  double mean = 0.0;
  double variance = 0.0;
  double mean_diag = 0.0;  // mean / n^{1/p} (p finite) or mean / log n
  double var_diag = 0.0;   // variance * n^{1 - 2/p} (p finite) or variance
};

std::vector<ExpNormRow> exponential_norm_profile(double p, const std::vector<Index>& n_list,
                                                 std::size_t n_samples, const RngStream& rng);

/// Quantile map to the symmetric exponential law: for u in (0,1),
/// F^{-1}(u) = log(2u) for u <= 1/2 and -log(2(1-u)) above.
double exponential_quantile(double u);

}  // namespace concentra
