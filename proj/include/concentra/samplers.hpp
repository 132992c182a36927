#pragma once

#include <string>

#include "concentra/linalg.hpp"
#include "concentra/rng.hpp"

namespace concentra {

/// A named sampling law on R^n. Descriptors are immutable and shareable;
/// all randomness flows through the RngStream passed at draw time.
struct Measure {
  enum class Kind { Gaussian, Exponential, SphereUniform, UniformLpBall, UniformCube };

  Kind kind;
  Index dim;
  double p = 2.0;  // exponent for UniformLpBall

  static Measure gaussian(Index n) { return {Kind::Gaussian, n}; }
  /// Product of symmetric unit-scale exponentials (density 2^{-n} e^{-||x||_1}).
  static Measure exponential(Index n) { return {Kind::Exponential, n}; }
  static Measure sphere(Index n) { return {Kind::SphereUniform, n}; }
  static Measure uniform_lp_ball(Index n, double p) { return {Kind::UniformLpBall, n, p}; }
  static Measure uniform_cube(Index n) { return {Kind::UniformCube, n}; }

  std::string label() const;
};

void sample_into(const Measure& m, RngStream& rng, Vector& out);

inline Vector sample(const Measure& m, RngStream& rng) {
  Vector v(m.dim);
  sample_into(m, rng, v);
  return v;
}

/// k x n matrix of iid standard normals.
Matrix gaussian_matrix(Index k, Index n, RngStream& rng);

/// Haar-distributed k-dimensional subspace of R^n, obtained by
/// orthonormalizing a Gaussian matrix (the positive-diagonal QR convention
/// makes this exactly rotation invariant).
Subspace haar_grassmann(Index n, Index k, RngStream& rng);

/// Uniform point on the unit sphere of the subspace, expressed in R^n.
Vector sphere_point_in(const Subspace& f, RngStream& rng);

/// Parses a measure string: "gaussian", "exponential", "sphere",
/// "uniform-cube", "uniform-ball:p=1". The dimension comes from the space
/// the measure is paired with.
Measure parse_measure(const std::string& spec, Index dim);

}  // namespace concentra
