#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>

namespace concentra {

/// SplitMix64 finalizer (Steele/Lea/Flood via Vigna). Bijective on 64-bit
/// words, passes BigCrush when driven by a Weyl sequence.
inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

/// Counter-based random stream. Word i of stream (seed, stream_id) is
/// mix64(key + i * golden) with key = h(seed, stream_id), so a stream is
/// identified entirely by (seed, stream_id) and replays bit-identically.
/// Substreams are derived by hashing, which makes parallel Monte Carlo
/// reproducible independent of scheduling: task t always receives
/// substream(t) no matter which worker runs it.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0) noexcept
      : seed_(seed),
        stream_id_(stream_id),
        key_(mix64(seed + kGolden) ^ mix64(stream_id * 0xBF58476D1CE4E5B9ULL + 0x94D049BB133111EBULL)),
        counter_(0) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }
  std::uint64_t counter() const noexcept { return counter_; }

  /// Deterministic child stream; indices give statistically independent
  /// streams and can be nested.
  RngStream substream(std::uint64_t index) const noexcept {
    return RngStream(seed_, mix64(stream_id_ + kGolden * (index + 1)));
  }

  std::uint64_t next_u64() noexcept { return mix64(key_ + kGolden * ++counter_); }

  /// Uniform on [0,1), 53-bit resolution.
  double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0,1]; safe under log().
  double uniform_open() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  /// Uniform on [-1,1).
  double uniform_sym() noexcept { return 2.0 * uniform() - 1.0; }

  /// Box-Muller pair of independent standard normals.
  void normal_pair(double& a, double& b) noexcept {
    const double r = std::sqrt(-2.0 * std::log(uniform_open()));
    const double t = 2.0 * M_PI * uniform();
    a = r * std::cos(t);
    b = r * std::sin(t);
  }

  double normal() noexcept {
    double a, b;
    normal_pair(a, b);
    return a;
  }

  double exponential() noexcept { return -std::log(uniform_open()); }

  /// Symmetric exponential (Laplace) with unit scale.
  double laplace() noexcept {
    const double e = exponential();
    return (next_u64() & 1u) ? e : -e;
  }

  double sign() noexcept { return (next_u64() & 1u) ? 1.0 : -1.0; }

  /// Gamma(shape, 1) via Marsaglia-Tsang squeeze; shapes below one are
  /// lifted with the standard boost Gamma(a) = Gamma(a+1) * U^{1/a}.
  double gamma(double shape) noexcept {
    if (shape < 1.0) {
      const double u = uniform_open();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, y;
      normal_pair(x, y);
      double v = 1.0 + c * x;
      if (v <= 0.0) continue;
      v = v * v * v;
      const double u = uniform_open();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  void fill_normal(Eigen::Ref<Eigen::VectorXd> out) noexcept {
    const Eigen::Index n = out.size();
    Eigen::Index i = 0;
    for (; i + 1 < n; i += 2) normal_pair(out[i], out[i + 1]);
    if (i < n) out[i] = normal();
  }

  /// Uniform point on the Euclidean unit sphere of the given dimension.
  Eigen::VectorXd sphere_point(Eigen::Index n) {
    Eigen::VectorXd v(n);
    double norm2;
    do {
      fill_normal(v);
      norm2 = v.squaredNorm();
    } while (norm2 == 0.0);
    v /= std::sqrt(norm2);
    return v;
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t key_;
  std::uint64_t counter_;
};

}  // namespace concentra
