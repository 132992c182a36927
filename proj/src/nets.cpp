#include "concentra/nets.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>

#include "concentra/errors.hpp"

namespace concentra {

double net_cardinality_bound(Index k, double delta) {
  return std::ceil(std::pow(1.0 + 2.0 / delta, static_cast<double>(k)));
}

namespace {

// Grid-bucket index over [-1,1]^k with cell size delta. Any point within
// Euclidean distance delta of a query differs by at most delta per
// coordinate, so scanning the 3^k neighboring cells is an exact
// nearest-within-delta search. Falls back to a linear scan for large k,
// where the cell window would outgrow the net itself.
class SphereIndex {
 public:
  SphereIndex(Index k, double delta)
      : k_(k), h_(delta), use_grid_(k <= 6) {}

  void insert(const std::vector<Vector>& points, const Vector& p) {
    if (use_grid_) cells_[key_of(p)].push_back(points.size());
  }

  // Distance from x to the net, exact whenever it is at most delta.
  double distance(const std::vector<Vector>& points, const Vector& x) const {
    double best2 = std::numeric_limits<double>::infinity();
    if (!use_grid_) {
      for (const Vector& p : points) best2 = std::min(best2, (x - p).squaredNorm());
      return std::sqrt(best2);
    }
    std::array<int, 12> base{};
    for (Index i = 0; i < k_; ++i) base[i] = cell_coord(x[i]);
    std::array<int, 12> offset{};
    offset.fill(-1);
    for (;;) {
      std::uint64_t key = 0;
      for (Index i = 0; i < k_; ++i)
        key = key * 1315423911u + static_cast<std::uint64_t>(base[i] + offset[i] + 64);
      const auto it = cells_.find(key);
      if (it != cells_.end())
        for (std::size_t idx : it->second)
          best2 = std::min(best2, (x - points[idx]).squaredNorm());
      Index d = 0;
      while (d < k_ && offset[d] == 1) offset[d++] = -1;
      if (d == k_) break;
      ++offset[d];
    }
    return std::sqrt(best2);
  }

 private:
  int cell_coord(double v) const { return static_cast<int>(std::floor((v + 1.0) / h_)); }

  std::uint64_t key_of(const Vector& p) const {
    std::uint64_t key = 0;
    for (Index i = 0; i < k_; ++i)
      key = key * 1315423911u + static_cast<std::uint64_t>(cell_coord(p[i]) + 64);
    return key;
  }

  Index k_;
  double h_;
  bool use_grid_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> cells_;
};

}  // namespace

Net build_net(Index k, double delta, std::size_t probe_count, RngStream& rng) {
  if (k < 1 || k > 12) throw ConfigError("build_net: k must be in [1, 12]");
  if (!(delta > 0.0 && delta <= 1.0)) throw ConfigError("build_net: delta must be in (0, 1]");
  const double bound = net_cardinality_bound(k, delta);
  if (bound > 1e7) throw CardinalityExplosion("build_net: (1 + 2/delta)^k exceeds 1e7");

  Net net;
  net.dim = k;
  net.delta = delta;
  SphereIndex index(k, delta);

  // One greedy pass over a stream of fresh sphere points: every point
  // farther than the threshold from the current net joins it, so the net
  // stays threshold-separated and the construction terminates.
  const auto greedy_pass = [&](double threshold, std::size_t count) {
    bool added_any = false;
    double max_gap = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      const Vector x = rng.sphere_point(k);
      const double gap = index.distance(net.points, x);
      if (gap > threshold) {
        index.insert(net.points, x);
        net.points.push_back(x);
        added_any = true;
      } else {
        max_gap = std::max(max_gap, gap);
      }
    }
    return std::pair<bool, double>(added_any, max_gap);
  };

  // Build at a slightly tighter mesh so the certificate at delta has
  // geometric slack; real covering cardinalities sit well below the
  // packing bound, which is flagged if ever exceeded.
  const double build_mesh = 0.9 * delta;
  const std::size_t build_count = std::max<std::size_t>(probe_count, 20000);
  bool settled = false;
  for (int pass = 0; pass < 500 && !settled; ++pass)
    settled = !greedy_pass(build_mesh, build_count).first;
  if (!settled) throw CoverageFail("build_net: greedy construction did not settle");

  // Certificate passes at the nominal mesh; probes exposing a gap are
  // patched in and a fresh pass must then come back clean.
  bool clean = false;
  for (int attempt = 0; attempt < 50 && !clean; ++attempt) {
    const auto [patched, max_gap] = greedy_pass(delta, probe_count);
    net.certificate = {probe_count, max_gap};
    clean = !patched;
  }
  if (!clean) throw CoverageFail("build_net: probes kept finding gaps after patching");

  net.cardinality_bound_exceeded = static_cast<double>(net.points.size()) > bound;
  return net;
}

ExtensionBounds extension_bounds(double epsilon, double delta) {
  if (!(delta >= 0.0 && delta < 1.0 && epsilon >= 0.0 && epsilon < 1.0))
    throw ConfigError("extension_bounds: need 0 <= delta, epsilon < 1");
  const double numerator = 1.0 - epsilon - 2.0 * delta;
  if (numerator <= 0.0) throw VacuousBound("extension_bounds: 1 - eps - 2 delta <= 0");
  return {numerator / (1.0 - delta), (1.0 + epsilon) / (1.0 - delta)};
}

}  // namespace concentra
