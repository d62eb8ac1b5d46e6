#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "delaycert/types.hpp"
#include "delaycert/weight.hpp"

namespace delaycert {

/**
 * Composite Gauss-Legendre quadrature settings. The panel count is doubled
 * until two successive estimates agree to max(rel_tol * |result|, abs_tol),
 * up to max_panels.
 */
struct QuadratureConfig {
  int order = 16;
  int initial_panels = 4;
  int max_panels = 512;
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;
};

/// Raised when panel doubling fails to converge before the cap.
/// Carries the last two composite estimates.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(std::string msg, Matrix last, Matrix previous)
      : std::runtime_error(std::move(msg)),
        last_estimate(std::move(last)),
        previous_estimate(std::move(previous)) {}

  Matrix last_estimate;
  Matrix previous_estimate;
};

/// Gauss-Legendre nodes and weights on [-1, 1]. Results are cached per order.
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre_rule(
    int order);

using MatrixFn = std::function<Matrix(double)>;
using VectorFn = std::function<Vector(double)>;
using ScalarFn = std::function<double(double)>;

/// Entrywise weighted integral of a matrix-valued integrand over `domain`.
/// The weight is folded into the integrand.
Matrix integrate_matrix(const MatrixFn& g, const WeightFn& w,
                        const Interval& domain, const QuadratureConfig& cfg);

Vector integrate_vector(const VectorFn& g, const WeightFn& w,
                        const Interval& domain, const QuadratureConfig& cfg);

double integrate_scalar(const ScalarFn& g, const WeightFn& w,
                        const Interval& domain, const QuadratureConfig& cfg);

/// Integrates a symmetric matrix integrand, checks that the raw result is
/// symmetric to 1e-14 relative, and returns the exact symmetrization.
SymMat integrate_symmetric(const MatrixFn& g, const WeightFn& w,
                           const Interval& domain, const QuadratureConfig& cfg);

}  // namespace delaycert
