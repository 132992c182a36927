#include "concentra/linalg.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>
#include <string>

namespace concentra {

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw NonFinite(std::string(what) + " has NaN/Inf entries");
}

Subspace::Subspace(Index ambient_dim, Matrix basis) : n_(ambient_dim), basis_(std::move(basis)) {
  if (basis_.cols() != n_ || basis_.rows() < 1 || basis_.rows() > n_)
    throw DimensionMismatch("Subspace basis must be k x n with 1 <= k <= n");
  require_finite(basis_, "Subspace basis");
  const Matrix gram = basis_ * basis_.transpose();
  const double dev = (gram - Matrix::Identity(basis_.rows(), basis_.rows())).cwiseAbs().maxCoeff();
  if (dev > kOrthoTol)
    throw RankDeficient("Subspace basis not orthonormal (max Gram deviation " +
                        std::to_string(dev) + ")");
}

Vector Subspace::project(const Vector& x) const {
  if (x.size() != n_) throw DimensionMismatch("project: vector dimension mismatch");
  return basis_.transpose() * (basis_ * x);
}

Vector singular_values(const Matrix& m) {
  require_finite(m, "singular_values input");
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues();
}

namespace {

void check_full_row_rank(const Vector& sv, Index rows, const char* op) {
  if (sv.size() < rows || sv(rows - 1) <= kRankGate * sv(0))
    throw RankDeficient(std::string(op) + ": matrix is not of full row rank");
}

}  // namespace

Subspace orthonormalize(const Matrix& m) {
  require_finite(m, "orthonormalize input");
  if (m.rows() > m.cols()) throw DimensionMismatch("orthonormalize: needs k <= n");
  const Index k = m.rows();
  const Index n = m.cols();
  check_full_row_rank(singular_values(m), k, "orthonormalize");

  Eigen::HouseholderQR<Matrix> qr(m.transpose());
  Matrix q = qr.householderQ() * Matrix::Identity(n, k);
  const Matrix r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  // Fix the QR sign ambiguity: R gets a positive diagonal.
  for (Index j = 0; j < k; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return Subspace(n, q.transpose());
}

PolarDecomposition polar_decompose(const Matrix& t) {
  require_finite(t, "polar_decompose input");
  if (t.rows() > t.cols()) throw DimensionMismatch("polar_decompose: needs k <= n");
  const Index k = t.rows();
  Eigen::JacobiSVD<Matrix> svd(t, Eigen::ComputeThinU | Eigen::ComputeThinV);
  check_full_row_rank(svd.singularValues(), k, "polar_decompose");

  const Matrix& u = svd.matrixU();
  const Matrix s = u * svd.singularValues().asDiagonal() * u.transpose();
  Matrix basis = u * svd.matrixV().transpose();
  return PolarDecomposition{s, Subspace(t.cols(), std::move(basis))};
}

}  // namespace concentra
