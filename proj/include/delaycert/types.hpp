#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace delaycert {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Closed finite interval [a, b] with a < b.
struct Interval {
  double a;
  double b;

  Interval(double lo, double hi) : a(lo), b(hi) {
    if (!(a < b)) throw std::invalid_argument("Interval: requires a < b");
    if (!std::isfinite(a) || !std::isfinite(b))
      throw std::invalid_argument("Interval: endpoints must be finite");
  }

  double length() const { return b - a; }

  bool contains(double t, double slack = 0.0) const {
    return t >= a - slack && t <= b + slack;
  }
};

/**
 * Symmetric matrix with exact entrywise symmetry: entries (i,j) and (j,i)
 * are the same double, enforced on construction.
 */
class SymMat {
 public:
  SymMat() = default;
  explicit SymMat(int dim) : m_(Matrix::Zero(dim, dim)) {}

  /// Exact symmetrization (A + A^T)/2. Each off-diagonal pair is computed
  /// once and assigned to both entries.
  static SymMat symmetrize(const Matrix& a) {
    require_square(a);
    SymMat s(static_cast<int>(a.rows()));
    for (int j = 0; j < a.cols(); ++j) {
      s.m_(j, j) = a(j, j);
      for (int i = j + 1; i < a.rows(); ++i) {
        const double v = 0.5 * (a(i, j) + a(j, i));
        s.m_(i, j) = v;
        s.m_(j, i) = v;
      }
    }
    return s;
  }

  /// Symmetrize, but reject inputs whose asymmetry exceeds `tol` relative
  /// to the matrix scale.
  static SymMat from_near_symmetric(const Matrix& a, double tol = 1e-10) {
    require_square(a);
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
    if (asym > tol * scale)
      throw std::invalid_argument("SymMat: input is not symmetric (asymmetry " +
                                  std::to_string(asym) + ")");
    return symmetrize(a);
  }

  static SymMat identity(int dim) { return symmetrize(Matrix::Identity(dim, dim)); }

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& mat() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  void set(int i, int j, double v) {
    m_(i, j) = v;
    m_(j, i) = v;
  }

 private:
  static void require_square(const Matrix& a) {
    if (a.rows() != a.cols())
      throw std::invalid_argument("SymMat: matrix must be square");
  }

  Matrix m_;
};

}  // namespace delaycert
