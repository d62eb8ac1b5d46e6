#include "delaycert/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace delaycert {

namespace {

std::pair<std::vector<double>, std::vector<double>> compute_rule(int order) {
  // Newton iteration on P_n with the Chebyshev-angle initial guess.
  std::vector<double> nodes(order), weights(order);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 1; k < order; ++k) {
        const double p2 = ((2 * k + 1) * x * p1 - k * p0) / (k + 1);
        p0 = p1;
        p1 = p2;
      }
      pp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[order - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    weights[i] = w;
    weights[order - 1 - i] = w;
  }
  return {nodes, weights};
}

}  // namespace

const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre_rule(
    int order) {
  if (order < 2) throw std::invalid_argument("gauss_legendre_rule: order >= 2");
  static std::mutex mtx;
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_rule(order)).first;
  return it->second;
}

namespace {

Matrix composite_pass(const MatrixFn& g, const WeightFn& w,
                      const Interval& domain, int order, int panels) {
  const auto& [nodes, wts] = gauss_legendre_rule(order);
  const double len = domain.length() / panels;
  Matrix acc;
  for (int p = 0; p < panels; ++p) {
    const double lo = domain.a + p * len;
    const double mid = lo + 0.5 * len;
    const double half = 0.5 * len;
    for (int q = 0; q < order; ++q) {
      const double tau = mid + half * nodes[q];
      const Matrix val = g(tau) * (w(tau, domain) * wts[q] * half);
      if (acc.size() == 0)
        acc = val;
      else
        acc += val;
    }
  }
  return acc;
}

}  // namespace

Matrix integrate_matrix(const MatrixFn& g, const WeightFn& w,
                        const Interval& domain, const QuadratureConfig& cfg) {
  if (cfg.order < 2 || cfg.initial_panels < 1)
    throw std::invalid_argument("integrate_matrix: bad quadrature config");
  int panels = cfg.initial_panels;
  Matrix prev = composite_pass(g, w, domain, cfg.order, panels);
  double diff = 0.0;
  while (2 * panels <= cfg.max_panels) {
    panels *= 2;
    Matrix next = composite_pass(g, w, domain, cfg.order, panels);
    diff = (next - prev).cwiseAbs().maxCoeff();
    const double scale = next.cwiseAbs().maxCoeff();
    if (diff <= std::max(cfg.rel_tol * scale, cfg.abs_tol)) return next;
    std::swap(prev, next);
    if (panels == cfg.max_panels) {
      throw AccuracyError("quadrature did not converge at panel cap " +
                              std::to_string(cfg.max_panels) + " (last delta " +
                              std::to_string(diff) + ")",
                          prev, next);
    }
  }
  throw AccuracyError("quadrature did not converge before panel cap " +
                          std::to_string(cfg.max_panels),
                      prev, prev);
}

Vector integrate_vector(const VectorFn& g, const WeightFn& w,
                        const Interval& domain, const QuadratureConfig& cfg) {
  MatrixFn gm = [&g](double tau) -> Matrix { return g(tau); };
  return integrate_matrix(gm, w, domain, cfg).col(0);
}

double integrate_scalar(const ScalarFn& g, const WeightFn& w,
                        const Interval& domain, const QuadratureConfig& cfg) {
  MatrixFn gm = [&g](double tau) -> Matrix {
    Matrix m(1, 1);
    m(0, 0) = g(tau);
    return m;
  };
  return integrate_matrix(gm, w, domain, cfg)(0, 0);
}

SymMat integrate_symmetric(const MatrixFn& g, const WeightFn& w,
                           const Interval& domain, const QuadratureConfig& cfg) {
  const Matrix raw = integrate_matrix(g, w, domain, cfg);
  const double scale = std::max(1.0, raw.cwiseAbs().maxCoeff());
  const double asym = (raw - raw.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-14 * scale)
    throw std::invalid_argument(
        "integrate_symmetric: integrand is not symmetric (asymmetry " +
        std::to_string(asym) + ")");
  return SymMat::symmetrize(raw);
}

}  // namespace delaycert
