#pragma once

#include <vector>

#include "concentra/linalg.hpp"
#include "concentra/rng.hpp"

namespace concentra {

struct NetCertificate {
  std::size_t probe_count = 0;
  double max_observed_gap = 0.0;
};

/// A delta-net on the Euclidean unit sphere S^{k-1}, with a probabilistic
/// coverage certificate from fresh probe points.
struct Net {
  Index dim = 0;
  double delta = 0.0;
  std::vector<Vector> points;  // unit vectors
  NetCertificate certificate;
  /// Set when the greedy construction needed more points than the
  /// volumetric bound ceil((1 + 2/delta)^k) to cover the probes.
  bool cardinality_bound_exceeded = false;

  std::size_t cardinality() const { return points.size(); }
};

/// ceil((1 + 2/delta)^k), the packing bound on the net cardinality.
double net_cardinality_bound(Index k, double delta);

/// Greedy farthest-point net over a random candidate pool: points are added
/// while some candidate lies farther than delta from the chosen set, so the
/// result is delta-separated (cardinality within the packing bound) and
/// delta-covers the pool. The certificate probes the sphere with fresh
/// points; probes that reveal a gap are added to the net and a second fresh
/// probe pass must then succeed, otherwise CoverageFail.
Net build_net(Index k, double delta, std::size_t probe_count, RngStream& rng);

struct ExtensionBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Two-sided bounds on ||T theta|| over the whole sphere given values in
/// [1 - eps, 1 + eps] on a delta-net:
///   (1 - eps - 2 delta) / (1 - delta) <= ||T theta|| <= (1 + eps) / (1 - delta).
/// Throws VacuousBound when the lower numerator is not positive.
ExtensionBounds extension_bounds(double epsilon, double delta);

}  // namespace concentra
