#include "delaycert/inequality.hpp"

namespace delaycert {

bool cert_admissible(const FreeMatrixCert& cert, const SymMat& u) {
  return schur_psd(u, cert.X, cert.Y);
}

double lhs_energy(const TestSignal& x, const SymMat& u, const WeightFn& w,
                  const Interval& domain, const QuadratureConfig& cfg) {
  if (u.dim() != x.n) throw std::invalid_argument("lhs_energy: U dim mismatch");
  return integrate_scalar(
      [&x, &u](double tau) {
        const Vector xv = x.eval(tau);
        return xv.dot(u.mat() * xv);
      },
      w, domain, cfg);
}

double gram_bound(const MomentVector& theta, const GramData& g, const SymMat& u) {
  const int d = g.basis.dim();
  if (theta.theta.size() != d * theta.n)
    throw std::invalid_argument("gram_bound: moment dimension mismatch");
  const Matrix kernel = kron(g.gram_inv.mat(), u.mat());
  return theta.theta.dot(kernel * theta.theta);
}

Vector least_squares_coeff(const MomentVector& theta, const GramData& g) {
  const int d = g.basis.dim();
  if (theta.theta.size() != d * theta.n)
    throw std::invalid_argument("least_squares_coeff: moment dimension mismatch");
  return kron(g.gram_inv.mat(), Matrix::Identity(theta.n, theta.n)) *
         theta.theta;
}

double residual_energy(const TestSignal& x, const BasisSet& basis,
                       const Vector& omega, const SymMat& u, const WeightFn& w,
                       const Interval& domain, const QuadratureConfig& cfg) {
  const int n = x.n;
  const int d = basis.dim();
  if (omega.size() != d * n)
    throw std::invalid_argument("residual_energy: omega dimension mismatch");
  return integrate_scalar(
      [&](double tau) {
        const Vector f = basis.eval_unchecked(tau);
        Vector approx = Vector::Zero(n);
        for (int i = 0; i < d; ++i) approx += f(i) * omega.segment(i * n, n);
        const Vector eps = x.eval(tau) - approx;
        return eps.dot(u.mat() * eps);
      },
      w, domain, cfg);
}

SymMat w_matrix(const SymMat& y, const BasisSet& basis, const WeightFn& w,
                const Interval& domain, int rho, int n,
                const QuadratureConfig& cfg) {
  const int d = basis.dim();
  const int q = rho * n;
  if (y.dim() != d * q)
    throw std::invalid_argument("w_matrix: Y must have dimension rho*d*n");
  return integrate_symmetric(
      [&](double tau) -> Matrix {
        const Vector f = basis.eval_unchecked(tau);
        // (f^T kron I_q) Y (f kron I_q) = sum_{i,j} f_i f_j Y_ij-block;
        // summation order breaks exact symmetry at rounding level, so the
        // mathematically symmetric value is re-symmetrized per evaluation
        Matrix out = Matrix::Zero(q, q);
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j)
            out += f(i) * f(j) * y.mat().block(i * q, j * q, q, q);
        return SymMat::symmetrize(out).mat();
      },
      w, domain, cfg);
}

double free_matrix_bound(const MomentVector& theta, const FreeMatrixCert& cert,
                         const SymMat& w_mat, const SymMat& u) {
  if (!cert_admissible(cert, u))
    throw std::invalid_argument(
        "free_matrix_bound: certificate violates the admissibility block "
        "condition; the bound would be unsound");
  if (cert.X_hat.rows() != theta.theta.size())
    throw std::invalid_argument("free_matrix_bound: Xhat/theta shape mismatch");
  if (w_mat.dim() != cert.z.size())
    throw std::invalid_argument("free_matrix_bound: W/z shape mismatch");
  return 2.0 * theta.theta.dot(cert.X_hat * cert.z) -
         cert.z.dot(w_mat.mat() * cert.z);
}

double corollary2_bound(const MomentVector& theta, const Matrix& upsilon,
                        const Vector& z, const Matrix& x_hat, const GramData& g,
                        const SymMat& u) {
  if (!cholesky_pd(u))
    throw std::invalid_argument("corollary2_bound: U must be positive definite");
  const double link =
      (upsilon * z - theta.theta).cwiseAbs().maxCoeff();
  if (link > 1e-8 * std::max(1.0, theta.theta.cwiseAbs().maxCoeff()))
    throw std::invalid_argument(
        "corollary2_bound: Upsilon z does not match the moment vector");
  const Matrix u_inv = sym_inverse(u).mat();
  const Matrix mid = sy(upsilon.transpose() * x_hat).mat() -
                     x_hat.transpose() * kron(g.gram.mat(), u_inv) * x_hat;
  return z.dot(mid * z);
}

std::pair<Matrix, SymMat> optimal_completion(const GramData& g, const SymMat& u,
                                             const Matrix& upsilon, int n) {
  if (!cholesky_pd(u))
    throw std::invalid_argument("optimal_completion: U must be positive definite");
  const Matrix x_hat = kron(g.gram_inv.mat(), u.mat()) * upsilon;
  const int d = g.basis.dim();
  const Matrix x = unstack_cols_to_rows(x_hat, d);
  const Matrix u_inv = sym_inverse(u).mat();
  const SymMat y = SymMat::symmetrize(x.transpose() * u_inv * x);
  (void)n;
  return {x_hat, y};
}

VerifyReport verify_inequality(const TestSignal& x, const SymMat& u,
                               const GramData& g, BoundKind kind,
                               const FreeMatrixCert* cert,
                               const QuadratureConfig& cfg, double tol) {
  VerifyReport rep;
  rep.lhs = lhs_energy(x, u, g.weight, g.domain, cfg);
  const MomentVector theta = moment(g.basis, g.weight, g.domain, x.eval, x.n, cfg);
  switch (kind) {
    case BoundKind::gram:
      rep.bound = gram_bound(theta, g, u);
      break;
    case BoundKind::free_matrix: {
      if (!cert)
        throw std::invalid_argument("verify_inequality: certificate required");
      const SymMat w =
          w_matrix(cert->Y, g.basis, g.weight, g.domain, cert->rho, x.n, cfg);
      rep.bound = free_matrix_bound(theta, *cert, w, u);
      break;
    }
    case BoundKind::corollary2: {
      if (!cert)
        throw std::invalid_argument("verify_inequality: certificate required");
      rep.bound =
          corollary2_bound(theta, cert->Upsilon, cert->z, cert->X_hat, g, u);
      break;
    }
  }
  rep.gap = rep.lhs - rep.bound;
  rep.pass = rep.lhs >= rep.bound - tol * std::max(1.0, std::abs(rep.lhs));
  return rep;
}

}  // namespace delaycert
