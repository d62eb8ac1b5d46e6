#pragma once

#include <functional>
#include <string>
#include <vector>

#include "delaycert/basis.hpp"
#include "delaycert/quadrature.hpp"

namespace delaycert {

/**
 * Linear coupled differential-difference system with a distributed delay:
 *
 *   x'(t) = A1 x(t) + A2 y(t-r) + integral_{-r}^{0} A3 (f(tau) kron I_nu)
 *           y(t+tau) dtau
 *   y(t)  = A4 x(t) + A5 y(t-r)
 *
 * where x in R^n, y in R^nu, and the distributed kernel is expressed through
 * the basis f (which must carry a companion matrix). Validity requires
 * spectral radius of A5 below one and a positive definite unweighted Gram of
 * f on [-r, 0].
 */
struct CddsModel {
  int n = 0;
  int nu = 0;
  double r = 0.0;
  Matrix A1;  // n x n
  Matrix A2;  // n x nu
  Matrix A3;  // n x (nu*d)
  Matrix A4;  // nu x n
  Matrix A5;  // nu x nu
  BasisSet basis;

  /// The distributed kernel A3 (f(tau) kron I_nu) at a given lag.
  Matrix kernel_at(double tau) const;

  /// Same model with a new delay; the basis is rebound to [-r, 0].
  CddsModel with_delay(double new_r) const;
};

/// Empty iff the model is valid: shapes consistent, spectral radius of A5
/// below one, Gram positive definite on [-r, 0], companion residual small.
std::vector<std::string> validate_model(const CddsModel& m,
                                        const QuadratureConfig& cfg);

struct InitialCondition {
  Vector xi;
  std::function<Vector(double)> phi;  // history on [-r, 0]
};

struct SimTrace {
  std::vector<double> times;
  std::vector<Vector> x;
  std::vector<Vector> y;
  double step = 0.0;
  bool diverged = false;
};

/// State norm threshold beyond which a run is flagged as diverged.
inline constexpr double kDivergenceThreshold = 1e12;

/**
 * Method-of-steps simulation with the grid aligned to the delay
 * (step = r / K). The ODE part advances with classical fourth-order steps;
 * the distributed integral uses the composite trapezoid over the stored
 * y-history, with the next grid value of the input obtained from an explicit
 * prediction of y(t+step). The difference channel is updated exactly on the
 * grid, so y(t_k) - A4 x(t_k) - A5 y(t_k - r) = 0 there.
 *
 * Divergent runs stop early with the trace flagged; verdicts are advisory
 * only (the simulator never labels a parameter unstable).
 */
SimTrace simulate(const CddsModel& m, const InitialCondition& ic, double t_end,
                  int steps_per_delay);

/// Overload taking the raw step; throws std::invalid_argument unless the
/// step divides r exactly (to 1e-9 relative).
SimTrace simulate(const CddsModel& m, const InitialCondition& ic, double t_end,
                  double step);

}  // namespace delaycert
