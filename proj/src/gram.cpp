#include "delaycert/gram.hpp"

#include <Eigen/Eigenvalues>

#include "delaycert/matalg.hpp"

namespace delaycert {

GramData gram_matrix(const BasisSet& basis, const WeightFn& w,
                     const Interval& domain, const QuadratureConfig& cfg) {
  if (domain.a < basis.domain().a - 1e-12 * (1 + std::abs(domain.a)) ||
      domain.b > basis.domain().b + 1e-12 * (1 + std::abs(domain.b)))
    throw std::invalid_argument("gram_matrix: domain not contained in basis domain");

  const SymMat gram = integrate_symmetric(
      [&basis](double tau) -> Matrix {
        const Vector f = basis.eval_unchecked(tau);
        return f * f.transpose();
      },
      w, domain, cfg);

  Eigen::SelfAdjointEigenSolver<Matrix> es(gram.mat());
  const Vector ev = es.eigenvalues();
  const double lmax = ev.maxCoeff();
  const double lmin = ev.minCoeff();
  if (lmin <= kGramPdTol * lmax)
    throw LinearDependenceError(
        "gram_matrix: Gram matrix is not positive definite (kernels linearly "
        "dependent on the domain; min/max eigenvalue ratio " +
        std::to_string(lmin / lmax) + ")");

  const Matrix inv = es.eigenvectors() * ev.cwiseInverse().asDiagonal() *
                     es.eigenvectors().transpose();
  return GramData{basis, w, domain, gram, SymMat::symmetrize(inv), lmax / lmin};
}

MomentVector moment(const BasisSet& basis, const WeightFn& w,
                    const Interval& domain,
                    const std::function<Vector(double)>& x, int n,
                    const QuadratureConfig& cfg) {
  if (n < 1) throw std::invalid_argument("moment: n >= 1 required");
  const int d = basis.dim();
  const Vector theta = integrate_vector(
      [&basis, &x, d, n](double tau) {
        const Vector f = basis.eval_unchecked(tau);
        const Vector xv = x(tau);
        Vector out(d * n);
        for (int i = 0; i < d; ++i) out.segment(i * n, n) = f(i) * xv;
        return out;
      },
      w, domain, cfg);
  return MomentVector{theta, n};
}

Matrix orthonormalizer(const GramData& g) { return sym_inv_sqrt(g.gram).mat(); }

}  // namespace delaycert
