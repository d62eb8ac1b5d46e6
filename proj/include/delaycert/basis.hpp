#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "delaycert/types.hpp"

namespace delaycert {

enum class BasisFamily { monomial, legendre, trig_block, custom };

/**
 * Kernel vector f(tau) in R^d on a finite interval, optionally equipped with
 * a companion matrix M such that df/dtau = M f.
 *
 * Built-in families:
 *   monomial    f_i(tau) = ((tau-a)/(b-a))^(i-1), M = subdiag((i-1)/(b-a))
 *   legendre    shifted Legendre polynomials of degrees 0..d-1 on [a,b]
 *   trig_block  [1, sin(w tau), cos(w tau)] with the rotation companion
 *
 * Instances are immutable; evaluation is pure.
 */
class BasisSet {
 public:
  using EvalFn = std::function<Vector(double)>;

  static BasisSet monomial(int d, const Interval& domain);
  static BasisSet legendre(int d, const Interval& domain);
  static BasisSet trig_block(double omega, const Interval& domain);

  /// Custom kernels. A companion matrix may be supplied by the caller;
  /// without one the basis is excluded from companion-dependent features.
  static BasisSet custom(int d, const Interval& domain, EvalFn eval,
                         std::optional<Matrix> companion = std::nullopt);

  int dim() const { return d_; }
  BasisFamily family() const { return family_; }
  const Interval& domain() const { return domain_; }
  double param() const { return param_; }  // omega for trig_block

  /// f(tau); throws std::domain_error when tau lies outside the domain.
  Vector operator()(double tau) const {
    if (!domain_.contains(tau, 1e-12 * (1.0 + std::abs(tau))))
      throw std::domain_error("BasisSet: tau outside domain");
    return eval_(tau);
  }

  Vector eval_unchecked(double tau) const { return eval_(tau); }

  bool has_companion() const { return companion_.has_value(); }

  const Matrix& companion() const {
    if (!companion_)
      throw std::logic_error("BasisSet: no companion matrix declared");
    return *companion_;
  }

  /// Rebuilds the same family on a new interval. Custom bases cannot be
  /// rebound (their eval closure is tied to the original chart).
  BasisSet with_domain(const Interval& domain) const;

  /// Max over `samples` uniform points of |f'(tau) - M f(tau)|_inf, with
  /// f' by central differences (adaptive h). Requires a companion.
  double companion_residual(int samples = 64) const;

 private:
  BasisSet(int d, BasisFamily fam, const Interval& domain, EvalFn eval,
           std::optional<Matrix> companion, double param)
      : d_(d),
        family_(fam),
        domain_(domain),
        eval_(std::move(eval)),
        companion_(std::move(companion)),
        param_(param) {}

  int d_;
  BasisFamily family_;
  Interval domain_;
  EvalFn eval_;
  std::optional<Matrix> companion_;
  double param_;
};

std::string to_string(BasisFamily family);

}  // namespace delaycert
