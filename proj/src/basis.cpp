#include "delaycert/basis.hpp"

#include <cmath>

namespace delaycert {

BasisSet BasisSet::monomial(int d, const Interval& domain) {
  if (d < 1) throw std::invalid_argument("monomial basis: d >= 1 required");
  const double a = domain.a;
  const double len = domain.length();
  EvalFn eval = [d, a, len](double tau) {
    Vector f(d);
    const double s = (tau - a) / len;
    double p = 1.0;
    for (int i = 0; i < d; ++i) {
      f(i) = p;
      p *= s;
    }
    return f;
  };
  // Change of variables from the unscaled chart (tau-a)^i: the scaled basis
  // keeps an exact companion with subdiagonal (i-1)/(b-a).
  Matrix m = Matrix::Zero(d, d);
  for (int i = 1; i < d; ++i) m(i, i - 1) = static_cast<double>(i) / len;
  return BasisSet(d, BasisFamily::monomial, domain, std::move(eval), m, 0.0);
}

BasisSet BasisSet::legendre(int d, const Interval& domain) {
  if (d < 1) throw std::invalid_argument("legendre basis: d >= 1 required");
  const double a = domain.a;
  const double len = domain.length();
  EvalFn eval = [d, a, len](double tau) {
    Vector f(d);
    const double x = 2.0 * (tau - a) / len - 1.0;
    double pkm1 = 1.0, pk = x;
    f(0) = 1.0;
    if (d > 1) f(1) = x;
    for (int k = 1; k + 1 < d; ++k) {
      const double pkp1 = ((2 * k + 1) * x * pk - k * pkm1) / (k + 1);
      f(k + 1) = pkp1;
      pkm1 = pk;
      pk = pkp1;
    }
    return f;
  };
  // d/dx P_k = sum_{j<k, k-j odd} (2j+1) P_j, chain rule adds 2/(b-a).
  Matrix m = Matrix::Zero(d, d);
  for (int k = 1; k < d; ++k)
    for (int j = k - 1; j >= 0; j -= 2) m(k, j) = (2 * j + 1) * 2.0 / len;
  return BasisSet(d, BasisFamily::legendre, domain, std::move(eval), m, 0.0);
}

BasisSet BasisSet::trig_block(double omega, const Interval& domain) {
  if (omega == 0.0)
    throw std::invalid_argument(
        "trig_block basis: omega = 0 is degenerate (constant duplicates row 1)");
  EvalFn eval = [omega](double tau) {
    Vector f(3);
    f << 1.0, std::sin(omega * tau), std::cos(omega * tau);
    return f;
  };
  Matrix m = Matrix::Zero(3, 3);
  m(1, 2) = omega;
  m(2, 1) = -omega;
  return BasisSet(3, BasisFamily::trig_block, domain, std::move(eval), m, omega);
}

BasisSet BasisSet::custom(int d, const Interval& domain, EvalFn eval,
                          std::optional<Matrix> companion) {
  if (d < 1) throw std::invalid_argument("custom basis: d >= 1 required");
  if (companion && (companion->rows() != d || companion->cols() != d))
    throw std::invalid_argument("custom basis: companion must be d x d");
  return BasisSet(d, BasisFamily::custom, domain, std::move(eval),
                  std::move(companion), 0.0);
}

BasisSet BasisSet::with_domain(const Interval& domain) const {
  switch (family_) {
    case BasisFamily::monomial:
      return monomial(d_, domain);
    case BasisFamily::legendre:
      return legendre(d_, domain);
    case BasisFamily::trig_block:
      return trig_block(param_, domain);
    case BasisFamily::custom:
      throw std::logic_error("BasisSet: custom basis cannot be rebound to a new domain");
  }
  throw std::logic_error("BasisSet: unknown family");
}

double BasisSet::companion_residual(int samples) const {
  const Matrix& m = companion();
  const double len = domain_.length();
  double worst = 0.0;
  for (int i = 0; i <= samples; ++i) {
    // keep the stencil inside the domain
    const double margin = 1e-4 * len;
    const double tau =
        domain_.a + margin + (len - 2 * margin) * i / samples;
    const double h = std::max(1e-6, 1e-7 * (1.0 + std::abs(tau)));
    const Vector df = (eval_(tau + h) - eval_(tau - h)) / (2.0 * h);
    const Vector res = df - m * eval_(tau);
    worst = std::max(worst, res.cwiseAbs().maxCoeff());
  }
  return worst;
}

std::string to_string(BasisFamily family) {
  switch (family) {
    case BasisFamily::monomial:
      return "monomial";
    case BasisFamily::legendre:
      return "legendre";
    case BasisFamily::trig_block:
      return "trig_block";
    case BasisFamily::custom:
      return "custom";
  }
  return "?";
}

}  // namespace delaycert
