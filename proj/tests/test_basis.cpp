#include <doctest.h>

#include <cmath>
#include <random>

#include "delaycert/basis.hpp"

using namespace delaycert;

TEST_CASE("trig block matches the rotation companion layout") {
  const BasisSet b = BasisSet::trig_block(12.0, Interval(-0.1, 0.0));
  CHECK(b.dim() == 3);
  Matrix want(3, 3);
  want << 0, 0, 0, 0, 0, 12, 0, -12, 0;
  CHECK((b.companion() - want).norm() == 0.0);

  const Vector f = BasisSet::trig_block(1.0, Interval(-1, 1))(0.0);
  CHECK(f(0) == 1.0);
  CHECK(f(1) == 0.0);
  CHECK(f(2) == 1.0);
}

TEST_CASE("trig block rejects omega zero") {
  CHECK_THROWS_AS(BasisSet::trig_block(0.0, Interval(-1, 0)),
                  std::invalid_argument);
}

TEST_CASE("trig block finite-difference companion residual") {
  const BasisSet b = BasisSet::trig_block(12.0, Interval(-0.1, 0.0));
  const Matrix& m = b.companion();
  for (double tau : {-0.05, -0.02}) {
    const double h = 1e-6;
    const Vector df = (b.eval_unchecked(tau + h) - b.eval_unchecked(tau - h)) /
                      (2.0 * h);
    CHECK((df - m * b.eval_unchecked(tau)).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("trig block analytic values at quarter and eighth periods") {
  const BasisSet b = BasisSet::trig_block(12.0, Interval(-1.0, 0.0));
  const Vector f8 = b(-M_PI / 48.0);  // omega*tau = -pi/4
  CHECK(f8(1) == doctest::Approx(-std::sqrt(2.0) / 2).epsilon(1e-14));
  CHECK(f8(2) == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-14));
  const Vector f4 = b(-M_PI / 24.0);  // omega*tau = -pi/2
  CHECK(f4(1) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(f4(2) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("legendre family basics") {
  const BasisSet d1 = BasisSet::legendre(1, Interval(-2, 3));
  CHECK(d1(0.5)(0) == 1.0);
  CHECK(d1.companion()(0, 0) == 0.0);

  // degree-1 shifted polynomial on [-1, 0] is 2 tau + 1
  const BasisSet d2 = BasisSet::legendre(2, Interval(-1, 0));
  for (double tau : {-1.0, -0.6, -0.25, 0.0})
    CHECK(d2(tau)(1) == doctest::Approx(2 * tau + 1).epsilon(1e-14));
}

TEST_CASE("monomial family evaluation") {
  CHECK(BasisSet::monomial(1, Interval(0, 1))(0.3)(0) == 1.0);
  const Vector f2 = BasisSet::monomial(2, Interval(0, 1))(0.5);
  CHECK(f2(0) == 1.0);
  CHECK(f2(1) == 0.5);
  const Vector f3 = BasisSet::monomial(3, Interval(0, 2))(1.0);
  CHECK(f3(0) == 1.0);
  CHECK(f3(1) == 0.5);
  CHECK(f3(2) == 0.25);
}

TEST_CASE("evaluation outside the domain is a domain error") {
  const BasisSet b = BasisSet::trig_block(12.0, Interval(-0.1, 0.0));
  CHECK_THROWS_AS(b(0.2), std::domain_error);
  CHECK_THROWS_AS(BasisSet::legendre(1, Interval(0, 1))(-0.5),
                  std::domain_error);
}

TEST_CASE("companion residual below 1e-6 for every built-in family") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lo(-2.0, 0.0), len(0.3, 2.0);
  for (int trial = 0; trial < 10; ++trial) {
    const double a = lo(rng);
    const Interval dom(a, a + len(rng));
    CHECK(BasisSet::monomial(4, dom).companion_residual() < 1e-6);
    CHECK(BasisSet::legendre(5, dom).companion_residual() < 1e-6);
    CHECK(BasisSet::trig_block(12.0, dom).companion_residual() < 1e-6);
  }
}

TEST_CASE("custom basis carries an optional caller companion") {
  auto eval = [](double tau) {
    Vector f(2);
    f << std::exp(tau), std::exp(tau) * tau;
    return f;
  };
  const BasisSet no_m = BasisSet::custom(2, Interval(0, 1), eval);
  CHECK(!no_m.has_companion());
  CHECK_THROWS_AS(no_m.companion(), std::logic_error);

  Matrix m(2, 2);
  m << 1, 0, 1, 1;  // d/dtau [e^t, t e^t] = [e^t, e^t + t e^t]
  const BasisSet with_m = BasisSet::custom(2, Interval(0, 1), eval, m);
  CHECK(with_m.companion_residual() < 1e-6);
  CHECK_THROWS_AS(with_m.with_domain(Interval(0, 2)), std::logic_error);
}

TEST_CASE("with_domain rebinds built-in families") {
  const BasisSet b = BasisSet::legendre(3, Interval(0, 1));
  const BasisSet moved = b.with_domain(Interval(-0.5, 0.0));
  CHECK(moved.domain().a == -0.5);
  CHECK(moved(-0.5)(1) == doctest::Approx(-1.0));  // endpoint value of degree 1
  CHECK(moved(0.0)(1) == doctest::Approx(1.0));
}
