#pragma once

#include <functional>
#include <stdexcept>

#include "delaycert/types.hpp"

namespace delaycert {

enum class WeightKind { constant_one, power_left, power_right, custom };

/**
 * Nonnegative weight function on an interval. Built-in kinds:
 *   constant_one  : 1
 *   power_left    : (tau - a)^p
 *   power_right   : (b - tau)^p
 * The power kinds read the endpoints from the interval supplied at
 * evaluation time, so the same weight object works on any domain.
 */
class WeightFn {
 public:
  WeightFn() : kind_(WeightKind::constant_one), p_(0) {}

  static WeightFn one() { return WeightFn(); }

  static WeightFn power_left(int p) {
    check_power(p);
    WeightFn w;
    w.kind_ = WeightKind::power_left;
    w.p_ = p;
    return w;
  }

  static WeightFn power_right(int p) {
    check_power(p);
    WeightFn w;
    w.kind_ = WeightKind::power_right;
    w.p_ = p;
    return w;
  }

  static WeightFn custom(std::function<double(double)> fn) {
    WeightFn w;
    w.kind_ = WeightKind::custom;
    w.fn_ = std::move(fn);
    return w;
  }

  WeightKind kind() const { return kind_; }
  int power() const { return p_; }

  double operator()(double tau, const Interval& domain) const {
    switch (kind_) {
      case WeightKind::constant_one:
        return 1.0;
      case WeightKind::power_left:
        return ipow(tau - domain.a, p_);
      case WeightKind::power_right:
        return ipow(domain.b - tau, p_);
      case WeightKind::custom:
        return fn_(tau);
    }
    return 1.0;
  }

  /// Samples the weight on a uniform grid and checks nonnegativity.
  /// Built-in kinds are nonnegative by construction; this is the only
  /// validation offered for custom weights.
  bool sample_nonnegative(const Interval& domain, int samples = 128) const {
    for (int i = 0; i <= samples; ++i) {
      const double tau = domain.a + domain.length() * i / samples;
      if ((*this)(tau, domain) < 0.0) return false;
    }
    return true;
  }

 private:
  static void check_power(int p) {
    if (p < 0) throw std::invalid_argument("WeightFn: power must be nonnegative");
  }

  static double ipow(double x, int p) {
    double r = 1.0;
    for (int i = 0; i < p; ++i) r *= x;
    return r;
  }

  WeightKind kind_;
  int p_;
  std::function<double(double)> fn_;
};

}  // namespace delaycert
