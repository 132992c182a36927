#pragma once

#include <vector>

#include "concentra/bodies.hpp"
#include "concentra/estimators.hpp"
#include "concentra/samplers.hpp"

namespace concentra {

/// A body paired with the subspace it is projected onto. The support
/// function of the projection restricts, h_{P_F A}(t) = h_A(t) for t in F,
/// equivalently h_A(P_F t) = h_A(t); restriction_residual probes that
/// identity and is expected to sit at rounding level.
struct ProjectionView {
  NormedSpace body;
  Subspace subspace;

  ProjectionView(NormedSpace a, Subspace f);
  double restriction_residual(std::size_t probe_count, const RngStream& rng) const;
};

/// Mean of the support function h_A over the unit sphere of F, which is the
/// mean width of the projection P_F A (the support function of a projection
/// restricts: h_{P_F A} = h_A on F).
ParamEstimate projected_width(const NormedSpace& a, const Subspace& f, std::size_t n_samples,
                              const RngStream& rng);

/// Mean of the gauge over the unit sphere of F: M(A cap F).
ParamEstimate section_mean(const NormedSpace& x, const Subspace& f, std::size_t n_samples,
                           const RngStream& rng);

/// Minimum of h_A over the sphere of F, from random probes refined by local
/// descent starting at the ten best probes. Probing can only overshoot the
/// true minimum, so the returned value is an upper bound on r(P_F A).
double projected_inradius(const NormedSpace& a, const Subspace& f, std::size_t probe_count,
                          const RngStream& rng);

enum class ProjectionMode { Width, Section };

struct ConcentrationRow {
  double t = 0.0;
  std::size_t events = 0;
  double tail_prob = 0.0;
};

/// Per-subspace ratios w(P_F A)/w(A) (or M_F/M) over Haar trials, with
/// empirical tail rows P(|ratio - 1| > t). Tail thresholds below the
/// 2 sqrt(k/n) floor are dropped. The std ratio against a 4k run is the
/// scaling diagnostic (concentration predicts about 1/2).
struct ConcentrationTable {
  ProjectionMode mode = ProjectionMode::Width;
  Index k = 0;
  std::size_t trials = 0;
  double reference = 0.0;  // w(A) or M(X) estimate
  std::vector<double> ratios;
  double ratio_mean = 0.0;
  double ratio_std = 0.0;
  double std_ratio_4k = 0.0;  // std at 4k over std at k, 0 when 4k > n-1
  std::vector<ConcentrationRow> tail;
};

ConcentrationTable concentration_experiment(const NormedSpace& body, ProjectionMode mode,
                                            Index k, std::size_t trials, std::size_t n_samples,
                                            const RngStream& rng,
                                            std::vector<double> t_grid = {});

/// Checks s_k(T) w(P_F A) <= w(TA) <= s_1(T) w(P_F A) with Monte Carlo
/// widths and three-standard-error slack; F is the row space of T.
struct SandwichVerdict {
  double s_min = 0.0, s_max = 0.0;
  double w_ta = 0.0, w_pfa = 0.0;
  double se_ta = 0.0, se_pfa = 0.0;
  bool pass = false;
};

SandwichVerdict polar_sandwich_check(const NormedSpace& a, const Matrix& t,
                                     std::size_t n_samples, const RngStream& rng);

/// Largest observed ratios of |w(P_E A) - w(P_F A)| against the two
/// Lipschitz envelopes sqrt(n/k) w(A) sigma_inf and R(A) sigma_2 over
/// random subspace pairs.
struct LipschitzProbeResult {
  double max_ratio_op = 0.0;
  double max_ratio_hs = 0.0;
  std::size_t pairs_used = 0;
};

LipschitzProbeResult lipschitz_probe(const NormedSpace& a, Index k, std::size_t pair_count,
                                     std::size_t n_samples, const RngStream& rng);

/// Monte Carlo residual of
///   int ||<u,t> u - <v,t> v||_2^2 dsigma(t) = (2/n)(1 - <u,v>^2).
struct SphereIdentityResult {
  double estimate = 0.0;
  double exact = 0.0;
  double residual = 0.0;
  double se = 0.0;
};

SphereIdentityResult sphere_identity_check(const Vector& u, const Vector& v,
                                           std::size_t n_samples, const RngStream& rng);

/// Variance of the Gaussian-image width statistic against its two bounds
/// R(A)^2 / k and Var h_A(Z). The statistic normalizes by c_k computed via
/// log-Gamma so the two sides are on the same scale.
struct WidthVarianceVerdict {
  double var_stat = 0.0;
  double se_var_stat = 0.0;
  double bound_radius = 0.0;     // R(A)^2 / k
  double bound_var_h = 0.0;      // Var h_A(Z) estimate
  double se_bound_var_h = 0.0;
  bool pass = false;
};

WidthVarianceVerdict gaussian_width_variance_check(const NormedSpace& a, Index k,
                                                   std::size_t n_matrices,
                                                   std::size_t inner_samples,
                                                   const RngStream& rng);

/// Fractions of Haar subspaces realizing the two one-sided inclusions
///   P_E A inside (1+eps) w(A) B_E   and   P_F A containing (1-eps) w(A) B_F.
struct InclusionRates {
  double rate_upper = 0.0;
  double rate_lower = 0.0;
  std::size_t trials = 0;
  double width_reference = 0.0;
};

InclusionRates one_sided_inclusion_rates(const NormedSpace& a, double epsilon, Index k_upper,
                                         Index k_lower, std::size_t trials,
                                         std::size_t probe_count, const RngStream& rng);

/// Left-tail profile of the projected width near its mean: empirical
/// P(w(P_F A) <= eps w(A)) on a grid of eps just below one, with the
/// least-squares slope of log P against log eps. The tail exponent grows
/// with k, so the slope steepens as the subspace dimension rises.
struct WidthSmallBallProfile {
  std::vector<double> eps_grid;
  std::vector<double> tail_prob;
  double slope = 0.0;  // d log P / d log eps over rows with events
};

WidthSmallBallProfile width_small_ball_profile(const NormedSpace& a, Index k,
                                               std::size_t trials, std::size_t n_samples,
                                               std::vector<double> eps_grid,
                                               const RngStream& rng);

}  // namespace concentra
