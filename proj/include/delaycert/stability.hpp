#pragma once

#include "delaycert/cdds.hpp"
#include "delaycert/gram.hpp"
#include "delaycert/lmi.hpp"
#include "delaycert/matalg.hpp"

namespace delaycert {

/// Invertible d x d transform applied to the kernel vector inside the
/// energy functional; the feasibility verdicts are invariant to it.
struct TransformChoice {
  Matrix G;

  static TransformChoice identity(int d) {
    return TransformChoice{Matrix::Identity(d, d)};
  }

  void validate() const;
};

/**
 * Constant blocks for the delay stability conditions, assembled from the
 * model, the transform G, and the unweighted Gram matrix on [-r, 0]:
 *
 *   H         row selector embedding (x, integral term) into the full
 *             quadratic-form coordinates (x, y(t-r), integral term)
 *   Gamma     [A4  A5  0]
 *   A_bold    [A1  A2  A3 (G^{-1} kron I_nu)]
 *   G_bold    [Ghat0 A4,  Ghat0 A5 - Ghat_mr,  -M_hat]
 *   M_hat     (G M G^{-1}) kron I_nu
 *   gram_g_inv  inverse Gram of the transformed kernels G f, i.e.
 *               (G gram G^T)^{-1} = G^{-T} gram^{-1} G^{-1}
 */
struct StabilityStructure {
  int n = 0, nu = 0, d = 0;
  double r = 0.0;
  Matrix H;        // (n+nu+d nu) x (n+d nu)
  Matrix Gamma;    // nu x (n+nu+d nu)
  Matrix A_bold;   // n x (n+nu+d nu)
  Matrix G_bold;   // d nu x (n+nu+d nu)
  Matrix M_hat;    // d nu x d nu
  Matrix Ghat0;    // d nu x nu
  Matrix Ghat_mr;  // d nu x nu
  SymMat gram_g_inv;  // d x d
};

StabilityStructure build_structure(const CddsModel& m, const TransformChoice& g,
                                   const GramData& gram);

/// Strictness margin scale: eps = kEpsScale * (1 + |constant term|_inf).
inline constexpr double kEpsScale = 1e-7;

/**
 * Stability condition in (P, S, U): the energy matrix plus the transformed
 * Gram block positive definite, S and U positive definite, and the
 * derivative form Phi1 negative definite.
 */
LmiProblem build_condition_32_33(const CddsModel& m, const TransformChoice& g,
                                 const GramData& gram);

/**
 * Equivalent free-matrix form with extra symmetric variables X1, X2 and the
 * Schur-complement corner blocks.
 */
LmiProblem build_condition_34_35(const CddsModel& m, const TransformChoice& g,
                                 const GramData& gram);

/**
 * Numerical check of the congruence identities: the transformed-basis forms
 * and their G-eliminated counterparts (with P = [I + (G^T kron I)] Phat
 * [I + (G kron I)] treated as the variable) must have equal inertia.
 */
struct CongruenceReport {
  Inertia inertia_energy_transformed;
  Inertia inertia_energy_plain;
  Inertia inertia_phi1_transformed;
  Inertia inertia_phi1_plain;
  Vector spectrum_energy_transformed;
  Vector spectrum_energy_plain;
  Vector spectrum_phi1_transformed;
  Vector spectrum_phi1_plain;
  bool energy_match = false;
  bool phi1_match = false;
};

CongruenceReport congruence_check(const CddsModel& m, const TransformChoice& g,
                                  const GramData& gram, const SymMat& p_hat,
                                  const SymMat& s, const SymMat& u);

}  // namespace delaycert
