#pragma once

#include "delaycert/types.hpp"

namespace delaycert {

/// Kronecker product, row-major block convention: block (i,j) is a(i,j)*b.
Matrix kron(const Matrix& a, const Matrix& b);

/// Sy(A) = A + A^T. Throws on non-square input.
SymMat sy(const Matrix& a);

/**
 * Completion-style lower bound M^T B + B^T M - M^T C M for B^T C^{-1} B,
 * valid for any M when C is positive definite; equality at M = C^{-1} B.
 * Throws std::invalid_argument when C fails a Cholesky PD check.
 */
SymMat lemma2_bound(const Matrix& b, const SymMat& c, const Matrix& m);

/**
 * Partitions X = [X_1 ... X_d] (row blocks of equal width) and returns the
 * column stack [X_1; ...; X_d]. With X of shape n x (d*q), the result has
 * shape (d*n) x q and satisfies X (f kron I_q) = (f^T kron I_n) Xhat for
 * every f in R^d.
 */
Matrix stack_rows_to_cols(const Matrix& x, int d);

/// Inverse of stack_rows_to_cols.
Matrix unstack_cols_to_rows(const Matrix& x_hat, int d);

double smallest_eigenvalue(const SymMat& a);
double largest_eigenvalue(const SymMat& a);

/// True iff the smallest eigenvalue exceeds `margin`.
bool is_pd(const SymMat& a, double margin = 0.0);

/// True iff the smallest eigenvalue is at least -margin.
bool is_psd(const SymMat& a, double margin = 0.0);

/// Fast PD pre-check via Cholesky.
bool cholesky_pd(const SymMat& a);

/**
 * Whether [[U, -X], [-X^T, Y]] >= 0, for U > 0. Evaluated both as the block
 * eigenproblem and through the Schur complement Y - X^T U^{-1} X; the two
 * routes must agree outside a small boundary band, otherwise a runtime
 * error is raised.
 */
bool schur_psd(const SymMat& u, const Matrix& x, const SymMat& y);

/// Inverse of a symmetric PD matrix through its eigendecomposition.
SymMat sym_inverse(const SymMat& a);

/// Symmetric PD square root and inverse square root.
SymMat sym_sqrt(const SymMat& a);
SymMat sym_inv_sqrt(const SymMat& a);

/// Inertia of a symmetric matrix: eigenvalue counts (negative, zero, positive)
/// with |lambda| <= tol * max|lambda| classified as zero.
struct Inertia {
  int negative = 0;
  int zero = 0;
  int positive = 0;
  bool operator==(const Inertia&) const = default;
};
Inertia inertia(const SymMat& a, double rel_tol = 1e-9);

}  // namespace delaycert
