#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "concentra/linalg.hpp"

namespace concentra {

/// Euclidean radii of the unit ball K of a normed space.
///   b = max of the gauge on the unit sphere (inverse inradius of K),
///   R = max Euclidean norm over K (outer radius, equals the max of the
///       support function on the sphere).
struct BodyConstants {
  double b = 0.0;
  double R = 0.0;
  bool analytic = false;
};

/// A finite-dimensional normed space X = (R^n, ||.||), identified with its
/// unit ball. Gauges are evaluable for every kind; support functions (dual
/// norms) only for kinds with a closed-form dual, everything else reports
/// UnsupportedDual. Instances are immutable and cheap to copy.
class NormedSpace {
 public:
  enum class Kind { Lp, Euclidean, AbsPlusLinf, AbsPlusLq, LinearImage, SubspaceRestriction };

  static NormedSpace lp(Index n, double p);
  static NormedSpace euclidean(Index n);
  /// ||(t, x)|| = |t| + ||x||_inf on R^n (t is the first coordinate).
  static NormedSpace abs_plus_linf(Index n);
  /// ||(t, x)|| = |t| + ||x||_q on R^n, q in (2, inf).
  static NormedSpace abs_plus_lq(Index n, double q);
  /// Unit ball T(K_base): gauge(x) = gauge_base(T^{-1} x).
  static NormedSpace linear_image(const Matrix& t, const NormedSpace& base,
                                  std::string label = "");
  /// Base norm restricted to a subspace, in basis coordinates:
  /// gauge(y) = gauge_base(B^T y) for the k x n basis B.
  static NormedSpace restriction(const Subspace& f, const NormedSpace& base);

  Kind kind() const;
  Index dim() const;
  const std::string& label() const;
  /// p (or q) exponent for the Lp / AbsPlusLq families.
  double exponent() const;

  double gauge(const Vector& x) const;
  bool has_support() const;
  double support(const Vector& y) const;

  /// Subgradient of the gauge, defined everywhere except 0; ties (e.g. the
  /// argmax of an l_inf norm) resolve to the lexicographically first
  /// maximizer so evaluation is deterministic.
  Vector gauge_gradient(const Vector& x) const;
  Vector support_gradient(const Vector& y) const;

  /// b and R; analytic table where available, multistart sphere
  /// optimization otherwise. Cached after the first call.
  const BodyConstants& constants() const;

 private:
  struct Impl;
  explicit NormedSpace(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// Parses a space specification string:
///   "lp:n=64:p=1", "lp:n=256:p=inf", "euclidean:n=32",
///   "abs+linf:n=1024", "abs+lq:n=256:q=5", "image:lp:n=32:p=1:scale=2".
/// Unknown kinds or keys raise ConfigError.
NormedSpace parse_space(const std::string& spec);

/// Multistart projected-gradient maximization of a 1-homogeneous convex
/// function over the Euclidean unit sphere. Shared by the numeric
/// circumradius path and the sphere-extremum refinements.
double sphere_maximize(const std::function<double(const Vector&)>& f,
                       const std::function<Vector(const Vector&)>& grad, Index n, int restarts,
                       double tol, std::uint64_t seed, Vector* argmax = nullptr);

}  // namespace concentra
