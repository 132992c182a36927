#pragma once

#include <Eigen/Core>

#include "concentra/errors.hpp"

namespace concentra {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// A k-dimensional subspace of R^n held as an orthonormal row basis.
/// Immutable after construction; the constructor enforces orthonormality
/// to 1e-10 in the max norm of B B^T - I.
class Subspace {
 public:
  Subspace(Index ambient_dim, Matrix basis);

  Index ambient_dim() const { return n_; }
  Index dim() const { return basis_.rows(); }
  const Matrix& basis() const { return basis_; }

  /// Orthogonal projection of x onto the subspace, expressed in R^n.
  Vector project(const Vector& x) const;

  /// Coordinates of x in the basis (the k-dimensional representation).
  Vector coordinates(const Vector& x) const { return basis_ * x; }

  /// Embeds k-dimensional coordinates back into R^n.
  Vector embed(const Vector& coords) const { return basis_.transpose() * coords; }

  /// n x n projection matrix B^T B.
  Matrix projection_matrix() const { return basis_.transpose() * basis_; }

  static constexpr double kOrthoTol = 1e-10;

 private:
  Index n_;
  Matrix basis_;
};

/// Relative singular-value gate below which a matrix counts as rank
/// deficient for the operations in this module.
inline constexpr double kRankGate = 1e-8;

void require_finite(const Matrix& m, const char* what);

/// Descending singular values of M.
Vector singular_values(const Matrix& m);

/// Row space of M as a Subspace. Uses Householder QR of M^T with the sign
/// convention that R has positive diagonal, which makes the map
/// Gaussian matrix -> Subspace exactly Haar distributed on the Grassmannian.
Subspace orthonormalize(const Matrix& m);

struct PolarDecomposition {
  Matrix symmetric;  // k x k positive semidefinite factor
  Subspace row_space;
};

/// T = S Q with S = (T T^*)^{1/2} and Q an orthonormal row basis of the row
/// space of T. Requires numerically full row rank.
PolarDecomposition polar_decompose(const Matrix& t);

}  // namespace concentra
