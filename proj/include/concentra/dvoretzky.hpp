#pragma once

#include <cstdint>

#include "concentra/bodies.hpp"
#include "concentra/nets.hpp"
#include "concentra/samplers.hpp"
#include "concentra/stats.hpp"

namespace concentra {

/// One random Gaussian embedding l_2^k -> X, checked on a delta-net with
/// delta = eps / 2 and probed densely on the sphere. When the net event
/// holds (all net values of ||Gz|| within eps of the estimated mean norm),
/// the certified interval bounds ||G theta|| / mean over the whole sphere.
struct EmbeddingReport {
  std::string space_label;
  Index k = 0;
  std::uint64_t seed = 0;
  double epsilon = 0.0;
  double net_delta = 0.0;
  std::size_t net_cardinality = 0;
  double mean_norm_estimate = 0.0;
  double net_min = 0.0;
  double net_max = 0.0;
  bool net_event = false;
  ExtensionBounds certified{0.0, 0.0};
  double sampled_min = 0.0;
  double sampled_max = 0.0;

  double sampled_distortion() const { return sampled_max / sampled_min; }
};

EmbeddingReport embed(const NormedSpace& x, Index k, double epsilon, std::size_t n_mean,
                      std::size_t probe_count, const RngStream& rng,
                      std::size_t net_probe_count = 20000);

/// Dimension prescribed by the union-bound arithmetic of the variance
/// method: floor((1/3) log(1/beta) / log(6e/eps)), clamped to at least 1.
Index variance_method_dimension(double beta, double epsilon);

/// Fraction of Haar subspaces whose gauge oscillation on the unit sphere of
/// the subspace stays below 1 + eps. The observed max/min ratio over the
/// probes is inflated by a 1.01 safety factor before the comparison, making
/// success claims conservative.
struct SphericalityResult {
  Index k = 0;
  double epsilon = 0.0;
  std::size_t trials = 0;
  std::size_t successes = 0;
  double p_hat = 0.0;
  BinomialCI ci95{0.0, 1.0};
  double safety_factor = 1.01;
};

SphericalityResult spherical_probability(const NormedSpace& x, Index k, double epsilon,
                                         std::size_t trials, std::size_t probe_count,
                                         const RngStream& rng);

enum class ThresholdMode { Half, ExpK };

/// Largest k <= k_max whose sphericality probability clears the threshold
/// (0.5, or 1 - e^{-k}) at the lower end of its confidence interval.
/// Scans k = 1, 2, 4, 8, 16 and bisects; returns 0 if k = 1 already fails.
Index estimate_k_eps(const NormedSpace& x, double epsilon, ThresholdMode mode,
                     std::size_t trials, const RngStream& rng, Index k_max = 16);

}  // namespace concentra
