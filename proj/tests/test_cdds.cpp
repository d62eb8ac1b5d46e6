#include <doctest.h>

#include <cmath>
#include <random>

#include "delaycert/cdds.hpp"

using namespace delaycert;

namespace {

const QuadratureConfig cfg;

/// The scalar benchmark system with the cosine distributed kernel.
CddsModel cosine_model(double r) {
  CddsModel m;
  m.n = 1;
  m.nu = 1;
  m.r = r;
  m.A1 = Matrix::Constant(1, 1, 0.35);
  m.A2 = Matrix::Constant(1, 1, 0.035);
  m.A3 = Matrix::Zero(1, 3);
  m.A3(0, 2) = -5.0;
  m.A4 = Matrix::Constant(1, 1, 1.0);
  m.A5 = Matrix::Constant(1, 1, 0.1);
  m.basis = BasisSet::trig_block(12.0, Interval(-r, 0.0));
  return m;
}

InitialCondition random_ic(const CddsModel& m, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  InitialCondition ic;
  ic.xi = Vector(m.n);
  for (int i = 0; i < m.n; ++i) ic.xi(i) = dist(rng);
  Vector c(3);
  c << dist(rng), dist(rng), dist(rng);
  const int nu = m.nu;
  ic.phi = [c, nu](double theta) {
    Vector v(nu);
    for (int i = 0; i < nu; ++i)
      v(i) = c(0) + c(1) * std::cos(3 * theta + i) + c(2) * theta;
    return v;
  };
  return ic;
}

double initial_size(const CddsModel& m, const InitialCondition& ic, int k) {
  double worst = ic.xi.norm();
  for (int j = 0; j <= k; ++j)
    worst = std::max(worst, ic.phi(-m.r + m.r * j / k).norm());
  return worst;
}

}  // namespace

TEST_CASE("benchmark model validates at r = 0.1") {
  CHECK(validate_model(cosine_model(0.1), cfg).empty());
}

TEST_CASE("spectral radius violation is reported") {
  CddsModel m = cosine_model(0.1);
  m.A5(0, 0) = 1.0;
  const auto issues = validate_model(m, cfg);
  REQUIRE(!issues.empty());
  CHECK(issues.front().find("spectral radius") != std::string::npos);
}

TEST_CASE("duplicated kernel row is reported as a singular gram") {
  CddsModel m = cosine_model(0.1);
  m.basis = BasisSet::custom(
      3, Interval(-0.1, 0.0),
      [](double tau) {
        Vector f(3);
        f << 1.0, 1.0, std::cos(12 * tau);
        return f;
      },
      Matrix::Zero(3, 3));
  bool found = false;
  for (const auto& s : validate_model(m, cfg))
    if (s.find("Gram singular") != std::string::npos) found = true;
  CHECK(found);
}

TEST_CASE("zero initial data stays identically zero") {
  const CddsModel m = cosine_model(0.13);
  InitialCondition ic;
  ic.xi = Vector::Zero(1);
  ic.phi = [](double) { return Vector::Zero(1); };
  const SimTrace tr = simulate(m, ic, 2.0, 64);
  for (const auto& x : tr.x) CHECK(x.norm() == 0.0);
  for (const auto& y : tr.y) CHECK(y.norm() == 0.0);
  CHECK(!tr.diverged);
}

TEST_CASE("pure scalar decay matches the closed form") {
  CddsModel m;
  m.n = 1;
  m.nu = 1;
  m.r = 0.25;
  m.A1 = Matrix::Constant(1, 1, -1.0);
  m.A2 = Matrix::Zero(1, 1);
  m.A3 = Matrix::Zero(1, 3);
  m.A4 = Matrix::Zero(1, 1);
  m.A5 = Matrix::Zero(1, 1);
  m.basis = BasisSet::trig_block(12.0, Interval(-0.25, 0.0));
  InitialCondition ic;
  ic.xi = Vector::Ones(1);
  ic.phi = [](double) { return Vector::Zero(1); };
  const SimTrace tr = simulate(m, ic, 1.0, 128);
  CHECK(tr.times.back() == doctest::Approx(1.0));
  CHECK(tr.x.back()(0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-8));
}

TEST_CASE("difference channel holds exactly on the grid") {
  const CddsModel m = cosine_model(0.13);
  const InitialCondition ic = random_ic(m, 5);
  const int k = 64;
  const SimTrace tr = simulate(m, ic, 3 * m.r, k);
  for (std::size_t i = k; i < tr.y.size(); ++i) {
    const Vector res = tr.y[i] - m.A4 * tr.x[i] - m.A5 * tr.y[i - k];
    CHECK(res.norm() == 0.0);
  }
}

TEST_CASE("halving the step changes the endpoint below 1e-6 relative") {
  const CddsModel m = cosine_model(0.13);
  // compatible initial data: phi(0) = A4 xi + A5 phi(-r), so the history has
  // no jump at t0 and the scheme shows its clean second-order behaviour
  InitialCondition ic;
  auto phi = [](double theta) {
    Vector v(1);
    v << std::cos(3 * theta) - 0.5;
    return v;
  };
  ic.phi = phi;
  ic.xi = Vector::Constant(1, (phi(0.0)(0) - 0.1 * phi(-0.13)(0)) / 1.0);
  const SimTrace coarse = simulate(m, ic, 40 * m.r, 2048);
  const SimTrace fine = simulate(m, ic, 40 * m.r, 4096);
  const double rel = (coarse.x.back() - fine.x.back()).norm() /
                     std::max(1e-12, fine.x.back().norm());
  CHECK(rel < 1e-6);
}

TEST_CASE("inside the first certified window the state decays") {
  const CddsModel m = cosine_model(0.13);
  const InitialCondition ic = random_ic(m, 7);
  const double init = initial_size(m, ic, 256);
  const SimTrace t40 = simulate(m, ic, 40 * m.r, 128);
  const SimTrace t80 = simulate(m, ic, 80 * m.r, 128);
  CHECK(!t40.diverged);
  const double r40 = (t40.x.back().norm() + t40.y.back().norm()) / init;
  const double r80 = (t80.x.back().norm() + t80.y.back().norm()) / init;
  // dominant mode near exp(-0.076 t): about 0.67 per 40 delay spans
  CHECK(r40 < 0.9);
  CHECK(r80 < 0.62 * r40 / 0.67 + 0.2 * r40);
  CHECK(r80 < r40);
}

TEST_CASE("outside every certified window the run blows up") {
  const CddsModel m = cosine_model(0.40);
  const InitialCondition ic = random_ic(m, 9);
  const double init = initial_size(m, ic, 256);
  const SimTrace tr = simulate(m, ic, 40 * m.r, 128);
  const double ratio = (tr.x.back().norm() + tr.y.back().norm()) / init;
  CHECK((tr.diverged || ratio > 1e3));
}

TEST_CASE("step must divide the delay exactly") {
  const CddsModel m = cosine_model(0.13);
  InitialCondition ic;
  ic.xi = Vector::Zero(1);
  ic.phi = [](double) { return Vector::Zero(1); };
  CHECK_THROWS_AS(simulate(m, ic, 1.0, m.r / 63.5), std::invalid_argument);
  CHECK_NOTHROW(simulate(m, ic, 0.5, m.r / 64.0));
  CHECK_THROWS_AS(simulate(m, ic, -1.0, 64), std::invalid_argument);
}
