#include "delaycert/stability.hpp"

#include <Eigen/Eigenvalues>

#include "delaycert/matalg.hpp"

namespace delaycert {

void TransformChoice::validate() const {
  if (G.rows() != G.cols())
    throw std::invalid_argument("TransformChoice: G must be square");
  const int d = static_cast<int>(G.rows());
  const double det = G.determinant();
  double norm_pow = 1.0;
  const double gnorm = std::max(1e-300, G.norm());
  for (int i = 0; i < d; ++i) norm_pow *= gnorm;
  if (std::abs(det) <= 1e-12 * norm_pow)
    throw std::invalid_argument("TransformChoice: G is numerically singular");
}

StabilityStructure build_structure(const CddsModel& m, const TransformChoice& g,
                                   const GramData& gram) {
  g.validate();
  const QuadratureConfig qcfg;
  {
    const auto issues = validate_model(m, qcfg);
    if (!issues.empty())
      throw std::invalid_argument("build_structure: invalid model: " +
                                  issues.front());
  }
  const int n = m.n, nu = m.nu, d = m.basis.dim();
  if (g.G.rows() != d)
    throw std::invalid_argument("build_structure: G must be d x d");
  if (gram.gram.dim() != d)
    throw std::invalid_argument("build_structure: Gram dimension mismatch");
  if (gram.weight.kind() != WeightKind::constant_one)
    throw std::invalid_argument(
        "build_structure: the energy functional uses the unweighted Gram");
  if (std::abs(gram.domain.a + m.r) > 1e-9 * (1 + m.r) ||
      std::abs(gram.domain.b) > 1e-12)
    throw std::invalid_argument("build_structure: Gram domain must be [-r, 0]");

  const int dnu = d * nu;
  const Matrix i_nu = Matrix::Identity(nu, nu);
  const Matrix g_inv = g.G.inverse();

  StabilityStructure st;
  st.n = n;
  st.nu = nu;
  st.d = d;
  st.r = m.r;

  st.H = Matrix::Zero(n + nu + dnu, n + dnu);
  st.H.topLeftCorner(n, n) = Matrix::Identity(n, n);
  st.H.bottomRightCorner(dnu, dnu) = Matrix::Identity(dnu, dnu);

  st.Gamma = Matrix::Zero(nu, n + nu + dnu);
  st.Gamma.block(0, 0, nu, n) = m.A4;
  st.Gamma.block(0, n, nu, nu) = m.A5;

  st.A_bold = Matrix::Zero(n, n + nu + dnu);
  st.A_bold.block(0, 0, n, n) = m.A1;
  st.A_bold.block(0, n, n, nu) = m.A2;
  st.A_bold.block(0, n + nu, n, dnu) = m.A3 * kron(g_inv, i_nu);

  const Vector f0 = m.basis.eval_unchecked(0.0);
  const Vector fmr = m.basis.eval_unchecked(-m.r);
  st.Ghat0 = kron(Matrix(g.G * f0), i_nu);
  st.Ghat_mr = kron(Matrix(g.G * fmr), i_nu);
  st.M_hat = kron(Matrix(g.G * m.basis.companion() * g_inv), i_nu);

  st.G_bold = Matrix::Zero(dnu, n + nu + dnu);
  st.G_bold.block(0, 0, dnu, n) = st.Ghat0 * m.A4;
  st.G_bold.block(0, n, dnu, nu) = st.Ghat0 * m.A5 - st.Ghat_mr;
  st.G_bold.block(0, n + nu, dnu, dnu) = -st.M_hat;

  // inverse Gram of the transformed kernels G f
  st.gram_g_inv = SymMat::symmetrize(
      g_inv.transpose() * gram.gram_inv.mat() * g_inv);
  return st;
}

namespace {

/// O_n (+) S (+) tail as a full (n+nu+dnu) square.
Matrix pad_diag(int n, const Matrix& mid, const Matrix& tail) {
  const int nu = static_cast<int>(mid.rows());
  const int dnu = static_cast<int>(tail.rows());
  Matrix out = Matrix::Zero(n + nu + dnu, n + nu + dnu);
  out.block(n, n, nu, nu) = mid;
  out.bottomRightCorner(dnu, dnu) = tail;
  return out;
}

Matrix phi_common(const StabilityStructure& st, const Matrix& p_hat,
                  const Matrix& s, const Matrix& u) {
  Matrix ag(st.n + st.d * st.nu, st.n + st.nu + st.d * st.nu);
  ag.topRows(st.n) = st.A_bold;
  ag.bottomRows(st.d * st.nu) = st.G_bold;
  const Matrix hpa = st.H * p_hat * ag;
  return hpa + hpa.transpose() +
         st.Gamma.transpose() * (s + st.r * u) * st.Gamma;
}

}  // namespace

LmiProblem build_condition_32_33(const CddsModel& m, const TransformChoice& g,
                                 const GramData& gram) {
  const StabilityStructure st = build_structure(m, g, gram);
  const int n = st.n, nu = st.nu, dnu = st.d * st.nu;

  std::vector<VarBlock> vars{{"P", n + dnu}, {"S", nu}, {"U", nu}};

  AffineMap energy = [st, n, nu, dnu](const std::vector<SymMat>& v) -> Matrix {
    Matrix out = v[0].mat();
    out.bottomRightCorner(dnu, dnu) += kron(st.gram_g_inv.mat(), v[1].mat());
    return out;
  };
  AffineMap s_pd = [](const std::vector<SymMat>& v) { return v[1].mat(); };
  AffineMap u_pd = [](const std::vector<SymMat>& v) { return v[2].mat(); };
  AffineMap phi1 = [st, n, nu, dnu](const std::vector<SymMat>& v) -> Matrix {
    return phi_common(st, v[0].mat(), v[1].mat(), v[2].mat()) -
           pad_diag(n, v[1].mat(), kron(st.gram_g_inv.mat(), v[2].mat()));
  };

  for (const AffineMap& map : {energy, s_pd, u_pd, phi1})
    if (!affinity_probe(map, vars, 0x716d5eb9u))
      throw std::logic_error("build_condition_32_33: affinity probe failed");

  std::vector<LmiConstraint> cons;
  cons.push_back(constraint_from_map("energy_pd", Sense::geq_eps, vars, energy,
                                     kEpsScale));
  cons.push_back(constraint_from_map("S_pd", Sense::geq_eps, vars, s_pd,
                                     kEpsScale));
  cons.push_back(constraint_from_map("U_pd", Sense::geq_eps, vars, u_pd,
                                     kEpsScale));
  cons.push_back(constraint_from_map("phi1_nd", Sense::leq_minus_eps, vars,
                                     phi1, kEpsScale));
  return LmiProblem(std::move(vars), std::move(cons));
}

LmiProblem build_condition_34_35(const CddsModel& m, const TransformChoice& g,
                                 const GramData& gram) {
  const StabilityStructure st = build_structure(m, g, gram);
  const int n = st.n, nu = st.nu, dnu = st.d * st.nu;

  std::vector<VarBlock> vars{
      {"P", n + dnu}, {"S", nu}, {"U", nu}, {"X1", dnu}, {"X2", dnu}};

  AffineMap energy = [st, n, nu, dnu](const std::vector<SymMat>& v) -> Matrix {
    const int top = n + dnu;
    Matrix out = Matrix::Zero(top + dnu, top + dnu);
    out.topLeftCorner(top, top) = v[0].mat();
    out.block(n, n, dnu, dnu) += 2.0 * v[3].mat();
    out.block(n, top, dnu, dnu) = v[3].mat();
    out.block(top, n, dnu, dnu) = v[3].mat();
    out.bottomRightCorner(dnu, dnu) = kron(st.gram_g_inv.mat(), v[1].mat());
    return out;
  };
  AffineMap s_pd = [](const std::vector<SymMat>& v) { return v[1].mat(); };
  AffineMap u_pd = [](const std::vector<SymMat>& v) { return v[2].mat(); };
  AffineMap deriv = [st, n, nu, dnu](const std::vector<SymMat>& v) -> Matrix {
    const int top = n + nu + dnu;
    Matrix out = Matrix::Zero(top + dnu, top + dnu);
    out.topLeftCorner(top, top) =
        phi_common(st, v[0].mat(), v[1].mat(), v[2].mat()) -
        pad_diag(n, v[1].mat(), Matrix(2.0 * v[4].mat()));
    out.block(n + nu, top, dnu, dnu) = v[4].mat();
    out.block(top, n + nu, dnu, dnu) = v[4].mat();
    out.bottomRightCorner(dnu, dnu) = -kron(st.gram_g_inv.mat(), v[2].mat());
    return out;
  };

  for (const AffineMap& map : {energy, s_pd, u_pd, deriv})
    if (!affinity_probe(map, vars, 0x2c8f3a41u))
      throw std::logic_error("build_condition_34_35: affinity probe failed");

  std::vector<LmiConstraint> cons;
  cons.push_back(constraint_from_map("energy_schur_pd", Sense::geq_eps, vars,
                                     energy, kEpsScale));
  cons.push_back(constraint_from_map("S_pd", Sense::geq_eps, vars, s_pd,
                                     kEpsScale));
  cons.push_back(constraint_from_map("U_pd", Sense::geq_eps, vars, u_pd,
                                     kEpsScale));
  cons.push_back(constraint_from_map("phi2_schur_nd", Sense::leq_minus_eps,
                                     vars, deriv, kEpsScale));
  return LmiProblem(std::move(vars), std::move(cons));
}

CongruenceReport congruence_check(const CddsModel& m, const TransformChoice& g,
                                  const GramData& gram, const SymMat& p_hat,
                                  const SymMat& s, const SymMat& u) {
  const StabilityStructure st = build_structure(m, g, gram);
  const int n = st.n, nu = st.nu, d = st.d, dnu = st.d * st.nu;
  const Matrix i_nu = Matrix::Identity(nu, nu);

  // transformed-basis forms
  Matrix energy_t = p_hat.mat();
  energy_t.bottomRightCorner(dnu, dnu) += kron(st.gram_g_inv.mat(), s.mat());
  const Matrix phi1_t =
      phi_common(st, p_hat.mat(), s.mat(), u.mat()) -
      pad_diag(n, s.mat(), kron(st.gram_g_inv.mat(), u.mat()));

  // G-eliminated forms with P as the congruence-transformed variable
  Matrix tp = Matrix::Identity(n + dnu, n + dnu);
  tp.bottomRightCorner(dnu, dnu) = kron(g.G, i_nu);
  const Matrix p = tp.transpose() * p_hat.mat() * tp;

  Matrix energy_p = p;
  energy_p.bottomRightCorner(dnu, dnu) += kron(gram.gram_inv.mat(), s.mat());

  const Vector f0 = m.basis.eval_unchecked(0.0);
  const Vector fmr = m.basis.eval_unchecked(-m.r);
  const Matrix f0k = kron(Matrix(f0), i_nu);
  const Matrix fmrk = kron(Matrix(fmr), i_nu);
  Matrix psi(n + dnu, n + nu + dnu);
  psi.block(0, 0, n, n) = m.A1;
  psi.block(0, n, n, nu) = m.A2;
  psi.block(0, n + nu, n, dnu) = m.A3;
  psi.block(n, 0, dnu, n) = f0k * m.A4;
  psi.block(n, n, dnu, nu) = f0k * m.A5 - fmrk;
  psi.block(n, n + nu, dnu, dnu) = -kron(m.basis.companion(), i_nu);

  const Matrix hpp = st.H * p * psi;
  const Matrix phi1_p = hpp + hpp.transpose() +
                        st.Gamma.transpose() * (s.mat() + st.r * u.mat()) *
                            st.Gamma -
                        pad_diag(n, s.mat(), kron(gram.gram_inv.mat(), u.mat()));

  CongruenceReport rep;
  auto spectrum = [](const Matrix& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(SymMat::symmetrize(a).mat(),
                                             Eigen::EigenvaluesOnly);
    return Vector(es.eigenvalues());
  };
  rep.spectrum_energy_transformed = spectrum(energy_t);
  rep.spectrum_energy_plain = spectrum(energy_p);
  rep.spectrum_phi1_transformed = spectrum(phi1_t);
  rep.spectrum_phi1_plain = spectrum(phi1_p);
  rep.inertia_energy_transformed = inertia(SymMat::symmetrize(energy_t));
  rep.inertia_energy_plain = inertia(SymMat::symmetrize(energy_p));
  rep.inertia_phi1_transformed = inertia(SymMat::symmetrize(phi1_t));
  rep.inertia_phi1_plain = inertia(SymMat::symmetrize(phi1_p));
  rep.energy_match =
      rep.inertia_energy_transformed == rep.inertia_energy_plain;
  rep.phi1_match = rep.inertia_phi1_transformed == rep.inertia_phi1_plain;
  (void)d;
  return rep;
}

}  // namespace delaycert
