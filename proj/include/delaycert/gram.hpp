#pragma once

#include "delaycert/basis.hpp"
#include "delaycert/quadrature.hpp"
#include "delaycert/types.hpp"
#include "delaycert/weight.hpp"

namespace delaycert {

/// Raised when the weighted Gram matrix is not positive definite, i.e. the
/// kernels are numerically linearly dependent on the domain.
class LinearDependenceError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/**
 * Weighted Gram matrix of a kernel vector: gram = integral of w * f f^T over
 * the domain, together with its inverse and condition number.
 */
struct GramData {
  BasisSet basis;
  WeightFn weight;
  Interval domain;
  SymMat gram;      // integral of w f f^T
  SymMat gram_inv;
  double cond = 0.0;
};

/// Weighted moment of a vector signal: theta = integral of w (f kron I_n) x,
/// stacked kernel-major (block i holds the weighted integral of f_i * x).
struct MomentVector {
  Vector theta;
  int n = 0;

  int d() const { return n > 0 ? static_cast<int>(theta.size()) / n : 0; }
};

/// pd_tol for the Gram PD check, relative to the largest eigenvalue.
inline constexpr double kGramPdTol = 1e-10;

/// Builds GramData; throws LinearDependenceError when the smallest
/// eigenvalue is at most kGramPdTol times the largest.
GramData gram_matrix(const BasisSet& basis, const WeightFn& w,
                     const Interval& domain, const QuadratureConfig& cfg);

MomentVector moment(const BasisSet& basis, const WeightFn& w,
                    const Interval& domain,
                    const std::function<Vector(double)>& x, int n,
                    const QuadratureConfig& cfg);

/**
 * Symmetric positive definite G with G^{ -2 } = gram, i.e. the inverse
 * square root of the Gram matrix. The transformed kernels G f(tau) have the
 * identity as their Gram matrix.
 */
Matrix orthonormalizer(const GramData& g);

}  // namespace delaycert
