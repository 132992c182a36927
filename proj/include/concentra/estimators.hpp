#pragma once

#include <functional>
#include <string>

#include "concentra/bodies.hpp"
#include "concentra/samplers.hpp"
#include "concentra/stats.hpp"

namespace concentra {

/// A scalar estimate with its standard error. Analytic closed forms carry
/// std_error = 0.
struct ParamEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
  std::string method;
};

/// Streaming statistics of f(Z) over N draws of Z ~ m. The full sample is
/// retained so medians and tail counts are exact. Work is split over fixed
/// chunks with per-chunk substreams; results do not depend on the thread
/// count. Throws NonFinite if f produces NaN or Inf.
SampleStats scalar_stats(const Measure& m, const std::function<double(const Vector&)>& f,
                         std::size_t n_samples, const RngStream& rng, bool keep_sample = true);

/// Normalized variance Var||Z|| / (E||Z||)^2 with a delta-method standard
/// error. Requires the mean estimate to clear 10 of its standard errors.
ParamEstimate beta_parameter(const NormedSpace& x, const Measure& m, std::size_t n_samples,
                             const RngStream& rng);

/// Critical dimension n (M/b)^2 where M is the spherical mean of the gauge
/// and b the circumradius constant.
ParamEstimate dvoretzky_dimension(const NormedSpace& x, std::size_t n_samples,
                                  const RngStream& rng);

struct ThetaEstimate {
  ParamEstimate theta;      // median times density at the median
  double median = 0.0;
  double density = 0.0;     // central finite difference of the empirical CDF
  double bandwidth = 0.0;   // 1.8 * sd * N^{-1/5}
};

/// theta = m f(m) for the law of the gauge under m. The density at the
/// median is a symmetric finite difference of the empirical CDF with a
/// Silverman-type bandwidth; the standard error comes from 20 batches.
ThetaEstimate theta_parameter(const NormedSpace& x, const Measure& m, std::size_t n_samples,
                              const RngStream& rng);

/// M_q(K) = (spherical mean of gauge^q)^{1/q}; q may be negative down to
/// the Monte Carlo integrability gate q > -n+1.
ParamEstimate sphere_moment(const NormedSpace& x, double q, std::size_t n_samples,
                            const RngStream& rng);

/// w_q(A) = (spherical mean of h_A^q)^{1/q}; w_1 is the mean width.
ParamEstimate width_moment(const NormedSpace& a, double q, std::size_t n_samples,
                           const RngStream& rng);

/// J_q(K) = (mean of ||x||_2^q under the uniform law on K)^{1/q}; K must be
/// an lp ball or the cube.
ParamEstimate body_moment(const NormedSpace& k, double q, std::size_t n_samples,
                          const RngStream& rng);

/// a_{n,q} from a_{n,q}^{-q} = (q/2) B(q, n+1), evaluated with log-Gamma.
double a_constant(double n, double q);

/// For q >= n, the implied constant in the bound
/// a_{n,q} <= exp(c n/q log(e q/n)); nonnegative whenever a >= 1.
double a_constant_implied_c(double n, double q);

/// Relative residual of the planar volume-ratio identity
///   vrad(K)^2 J_p^p(K) = (2 / (2+p)) M_{-(2+p)}^{-(2+p)}(K)
/// for a 2-dimensional body, with the two sides evaluated by different
/// deterministic angular quadrature rules so that the residual reflects
/// genuine discretization error.
double vrad_identity_residual(const NormedSpace& k2, double p, int nodes = 10000);

/// Over-concentration parameter sqrt(beta k) = sqrt(Var||Z||) / b: how far
/// the norm's spread sits below what its Lipschitz constant allows.
ParamEstimate ov_parameter(const NormedSpace& x, std::size_t n_samples, const RngStream& rng);

/// Exact beta of the l2 norm under the standard Gaussian in dimension n.
double beta_l2_gaussian(int n);

}  // namespace concentra
