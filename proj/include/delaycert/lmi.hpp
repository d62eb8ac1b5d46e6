#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "delaycert/types.hpp"

namespace delaycert {

/// Symmetric decision-variable block.
struct VarBlock {
  std::string name;
  int dim = 0;

  int packed_size() const { return dim * (dim + 1) / 2; }
};

enum class Sense { geq_eps, leq_minus_eps };

/**
 * One affine symmetric-matrix constraint
 *   constant + sum_i theta_i * coeffs[i]  (>= eps I | <= -eps I)
 * over the packed scalar decision vector theta.
 */
struct LmiConstraint {
  std::string name;
  Sense sense = Sense::geq_eps;
  int dim = 0;
  double eps = 0.0;
  Matrix constant;
  std::vector<Matrix> coeffs;  // one per packed scalar variable
};

/**
 * Affine semidefinite feasibility problem in symmetric variable blocks.
 *
 * Packing convention: each symmetric block is stored as its lower triangle,
 * stacked column by column, with off-diagonal entries scaled by sqrt(2) so
 * the packing is an isometry for the Frobenius inner product.
 */
class LmiProblem {
 public:
  LmiProblem() = default;
  LmiProblem(std::vector<VarBlock> vars, std::vector<LmiConstraint> cons)
      : variables_(std::move(vars)), constraints_(std::move(cons)) {}

  const std::vector<VarBlock>& variables() const { return variables_; }
  const std::vector<LmiConstraint>& constraints() const { return constraints_; }

  /// Number of free scalar decision variables across all blocks.
  int num_decision_vars() const {
    int total = 0;
    for (const auto& v : variables_) total += v.packed_size();
    return total;
  }

  static Vector pack_sym(const SymMat& s);
  static SymMat unpack_sym(const Vector& packed, int dim);

  Vector pack(const std::vector<SymMat>& assignment) const;
  std::vector<SymMat> unpack(const Vector& theta) const;

  /// Constraint matrix value at a packed assignment.
  Matrix constraint_value(int k, const Vector& theta) const;

  /// JSON problem dump for external backends; round-trips through
  /// from_json with verdicts preserved.
  std::string to_json() const;
  static LmiProblem from_json(const std::string& text);

 private:
  std::vector<VarBlock> variables_;
  std::vector<LmiConstraint> constraints_;
};

/// Affine map from symmetric variable blocks to a constraint matrix.
using AffineMap = std::function<Matrix(const std::vector<SymMat>&)>;

/// Probes map(a v1 + b v2) = a map(v1) + b map(v2) - (a+b-1) map(0) on
/// random assignments.
bool affinity_probe(const AffineMap& map, const std::vector<VarBlock>& vars,
                    std::uint64_t seed, int trials = 4, double tol = 1e-8);

/**
 * Extracts the numeric affine form of `map` by probing the zero assignment
 * and each packed unit direction. The strictness margin is set to
 * eps_scale * (1 + |constant|_inf).
 */
LmiConstraint constraint_from_map(const std::string& name, Sense sense,
                                  const std::vector<VarBlock>& vars,
                                  const AffineMap& map, double eps_scale);

enum class FeasStatus { feasible, infeasible, inconclusive };

std::string to_string(FeasStatus s);

struct FeasibilityResult {
  FeasStatus status = FeasStatus::inconclusive;
  std::vector<SymMat> witness;   // populated when feasible
  std::vector<double> margins;   // per constraint: lambda_min (geq) or
                                 // -lambda_max (leq) of the affine value
  int newton_iterations = 0;
  double final_mu = 0.0;
  std::string note;
};

struct SolverOptions {
  double mu_initial = 1.0;
  double mu_factor = 0.2;
  double mu_min = 1e-13;
  int max_newton_total = 600;
  int max_newton_per_stage = 40;
  double newton_tol = 1e-9;      // squared Newton decrement
  double infeas_safety = 2.0;    // duality-gap safety multiplier
};

/**
 * Log-det barrier path-following on the block aggregate: minimizes the
 * uniform slack s subject to every flipped constraint plus s I staying
 * positive definite. Feasible as soon as an iterate certifies positive
 * margins (the witness is re-verified by fresh eigensolves); infeasible when
 * the slack minus the duality-gap bound stays positive at a centered point.
 */
FeasibilityResult solve_feasibility(const LmiProblem& p,
                                    const SolverOptions& opt = {});

}  // namespace delaycert
