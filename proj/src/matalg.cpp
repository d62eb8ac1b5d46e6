#include "delaycert/matalg.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>

namespace delaycert {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

SymMat sy(const Matrix& a) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("sy: matrix must be square");
  return SymMat::symmetrize(a + a.transpose());
}

SymMat lemma2_bound(const Matrix& b, const SymMat& c, const Matrix& m) {
  if (c.dim() != b.rows() || m.rows() != b.rows() || m.cols() != b.cols())
    throw std::invalid_argument("lemma2_bound: shape mismatch");
  if (!cholesky_pd(c))
    throw std::invalid_argument("lemma2_bound: C must be positive definite");
  const Matrix val =
      m.transpose() * b + b.transpose() * m - m.transpose() * c.mat() * m;
  return SymMat::symmetrize(val);
}

Matrix stack_rows_to_cols(const Matrix& x, int d) {
  if (d < 1) throw std::invalid_argument("stack_rows_to_cols: d >= 1 required");
  if (x.cols() % d != 0)
    throw std::invalid_argument(
        "stack_rows_to_cols: column count not divisible by d");
  const int q = static_cast<int>(x.cols()) / d;
  const int n = static_cast<int>(x.rows());
  Matrix out(d * n, q);
  for (int i = 0; i < d; ++i)
    out.block(i * n, 0, n, q) = x.block(0, i * q, n, q);
  return out;
}

Matrix unstack_cols_to_rows(const Matrix& x_hat, int d) {
  if (d < 1) throw std::invalid_argument("unstack_cols_to_rows: d >= 1 required");
  if (x_hat.rows() % d != 0)
    throw std::invalid_argument(
        "unstack_cols_to_rows: row count not divisible by d");
  const int n = static_cast<int>(x_hat.rows()) / d;
  const int q = static_cast<int>(x_hat.cols());
  Matrix out(n, d * q);
  for (int i = 0; i < d; ++i)
    out.block(0, i * q, n, q) = x_hat.block(i * n, 0, n, q);
  return out;
}

double smallest_eigenvalue(const SymMat& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.mat(),
                                           Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double largest_eigenvalue(const SymMat& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.mat(),
                                           Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

bool is_pd(const SymMat& a, double margin) {
  if (margin < 0) throw std::invalid_argument("is_pd: margin >= 0 required");
  return smallest_eigenvalue(a) > margin;
}

bool is_psd(const SymMat& a, double margin) {
  if (margin < 0) throw std::invalid_argument("is_psd: margin >= 0 required");
  return smallest_eigenvalue(a) >= -margin;
}

bool cholesky_pd(const SymMat& a) {
  Eigen::LLT<Matrix> llt(a.mat());
  return llt.info() == Eigen::Success;
}

bool schur_psd(const SymMat& u, const Matrix& x, const SymMat& y) {
  if (x.rows() != u.dim() || x.cols() != y.dim())
    throw std::invalid_argument("schur_psd: shape mismatch");
  if (!cholesky_pd(u))
    throw std::invalid_argument("schur_psd: U must be positive definite");

  const int m = u.dim();
  const int p = y.dim();
  Matrix block(m + p, m + p);
  block.topLeftCorner(m, m) = u.mat();
  block.topRightCorner(m, p) = -x;
  block.bottomLeftCorner(p, m) = -x.transpose();
  block.bottomRightCorner(p, p) = y.mat();
  const SymMat blk = SymMat::symmetrize(block);

  const SymMat schur =
      SymMat::symmetrize(y.mat() - x.transpose() * u.mat().llt().solve(x));

  const double lb = smallest_eigenvalue(blk);
  const double ls = smallest_eigenvalue(schur);
  const double band_b = 1e-11 * std::max(1.0, blk.mat().cwiseAbs().maxCoeff());
  const double band_s = 1e-11 * std::max(1.0, schur.mat().cwiseAbs().maxCoeff());
  const bool vb = lb >= -band_b;
  const bool vs = ls >= -band_s;
  if (vb != vs) {
    // disagreement only tolerated when both margins sit in the boundary band
    if (std::abs(lb) > band_b && std::abs(ls) > band_s)
      throw std::runtime_error("schur_psd: block and Schur routes disagree");
  }
  return vb;
}

SymMat sym_inverse(const SymMat& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.mat());
  const Vector ev = es.eigenvalues();
  if (ev.minCoeff() <= 0)
    throw std::invalid_argument("sym_inverse: matrix is not positive definite");
  const Matrix out =
      es.eigenvectors() * ev.cwiseInverse().asDiagonal() *
      es.eigenvectors().transpose();
  return SymMat::symmetrize(out);
}

SymMat sym_sqrt(const SymMat& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.mat());
  const Vector ev = es.eigenvalues();
  if (ev.minCoeff() < 0)
    throw std::invalid_argument("sym_sqrt: matrix is not positive semidefinite");
  const Matrix out = es.eigenvectors() * ev.cwiseSqrt().asDiagonal() *
                     es.eigenvectors().transpose();
  return SymMat::symmetrize(out);
}

SymMat sym_inv_sqrt(const SymMat& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.mat());
  const Vector ev = es.eigenvalues();
  if (ev.minCoeff() <= 0)
    throw std::invalid_argument(
        "sym_inv_sqrt: matrix is not positive definite");
  const Matrix out = es.eigenvectors() *
                     ev.cwiseSqrt().cwiseInverse().asDiagonal() *
                     es.eigenvectors().transpose();
  return SymMat::symmetrize(out);
}

Inertia inertia(const SymMat& a, double rel_tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.mat(), Eigen::EigenvaluesOnly);
  const Vector ev = es.eigenvalues();
  const double tol = rel_tol * std::max(1e-300, ev.cwiseAbs().maxCoeff());
  Inertia out;
  for (int i = 0; i < ev.size(); ++i) {
    if (ev(i) > tol)
      ++out.positive;
    else if (ev(i) < -tol)
      ++out.negative;
    else
      ++out.zero;
  }
  return out;
}

}  // namespace delaycert
