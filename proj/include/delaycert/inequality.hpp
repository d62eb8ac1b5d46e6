#pragma once

#include <functional>
#include <utility>

#include "delaycert/gram.hpp"
#include "delaycert/matalg.hpp"

namespace delaycert {

/// Signal x(.) in the weighted L2 space on the working interval.
struct TestSignal {
  int n = 0;
  std::function<Vector(double)> eval;
};

/**
 * Free-matrix certificate data (X, Xhat, Y, Upsilon, z). Admissibility means
 * [[U, -X], [-X^T, Y]] >= 0; Xhat is the column stack of the row blocks of
 * X. When Upsilon and z are used, Upsilon z must equal the moment vector of
 * the signal under test.
 */
struct FreeMatrixCert {
  int rho = 1;
  Matrix X;        // n x (rho d n)
  Matrix X_hat;    // (d n) x (rho n)
  SymMat Y;        // rho d n
  Matrix Upsilon;  // (d n) x (rho n)
  Vector z;        // rho n
};

/// Checks [[U, -X], [-X^T, Y]] >= 0 for the cert.
bool cert_admissible(const FreeMatrixCert& cert, const SymMat& u);

/// Weighted energy: integral of w x^T U x.
double lhs_energy(const TestSignal& x, const SymMat& u, const WeightFn& w,
                  const Interval& domain, const QuadratureConfig& cfg);

/// Gram lower bound theta^T (gram_inv kron U) theta.
double gram_bound(const MomentVector& theta, const GramData& g, const SymMat& u);

/// Least-squares coefficient omega = (gram_inv kron I_n) theta, minimizing
/// the weighted residual |x - F^T omega|^2 over omega.
Vector least_squares_coeff(const MomentVector& theta, const GramData& g);

/// Weighted residual energy |x - F^T omega|^2_{U,w} for a given coefficient.
double residual_energy(const TestSignal& x, const BasisSet& basis,
                       const Vector& omega, const SymMat& u, const WeightFn& w,
                       const Interval& domain, const QuadratureConfig& cfg);

/**
 * W = integral of w (f^T kron I_{rho n}) Y (f kron I_{rho n}).
 */
SymMat w_matrix(const SymMat& y, const BasisSet& basis, const WeightFn& w,
                const Interval& domain, int rho, int n,
                const QuadratureConfig& cfg);

/**
 * Free-matrix lower bound 2 theta^T Xhat z - z^T W z. Requires an admissible
 * certificate (throws std::invalid_argument otherwise, since the bound claim
 * would be unsound).
 */
double free_matrix_bound(const MomentVector& theta, const FreeMatrixCert& cert,
                         const SymMat& w_mat, const SymMat& u);

/**
 * Reduced free-matrix bound z^T [Sy(Upsilon^T Xhat) -
 * Xhat^T (gram kron U^{-1}) Xhat] z. Requires U > 0.
 */
double corollary2_bound(const MomentVector& theta, const Matrix& upsilon,
                        const Vector& z, const Matrix& x_hat, const GramData& g,
                        const SymMat& u);

/**
 * Optimal completion: Xhat = (gram_inv kron U) Upsilon and Y = X^T U^{-1} X,
 * for which the free-matrix and reduced bounds coincide with the Gram bound.
 * Returns (Xhat, Y).
 */
std::pair<Matrix, SymMat> optimal_completion(const GramData& g, const SymMat& u,
                                             const Matrix& upsilon, int n);

enum class BoundKind { gram, free_matrix, corollary2 };

struct VerifyReport {
  double lhs = 0.0;
  double bound = 0.0;
  double gap = 0.0;
  bool pass = false;
};

/**
 * Falsification oracle: evaluates the left side and the requested lower
 * bound, passing iff lhs >= bound - tol * max(1, |lhs|). For the free-matrix
 * and reduced kinds a certificate must be supplied.
 */
VerifyReport verify_inequality(const TestSignal& x, const SymMat& u,
                               const GramData& g, BoundKind kind,
                               const FreeMatrixCert* cert,
                               const QuadratureConfig& cfg, double tol = 1e-9);

}  // namespace delaycert
