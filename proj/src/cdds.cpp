#include "delaycert/cdds.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "delaycert/gram.hpp"
#include "delaycert/matalg.hpp"

namespace delaycert {

Matrix CddsModel::kernel_at(double tau) const {
  const Vector f = basis.eval_unchecked(tau);
  return A3 * kron(f, Matrix::Identity(nu, nu));
}

CddsModel CddsModel::with_delay(double new_r) const {
  if (new_r <= 0) throw std::invalid_argument("CddsModel: delay must be positive");
  CddsModel out = *this;
  out.r = new_r;
  out.basis = basis.with_domain(Interval(-new_r, 0.0));
  return out;
}

std::vector<std::string> validate_model(const CddsModel& m,
                                        const QuadratureConfig& cfg) {
  std::vector<std::string> issues;
  if (m.n < 1 || m.nu < 1) issues.push_back("dimensions must be positive");
  if (m.r <= 0) issues.push_back("delay r must be positive");
  const int d = m.basis.dim();
  auto shape = [&](const Matrix& a, int rows, int cols, const char* name) {
    if (a.rows() != rows || a.cols() != cols)
      issues.push_back(std::string(name) + " has wrong shape");
  };
  shape(m.A1, m.n, m.n, "A1");
  shape(m.A2, m.n, m.nu, "A2");
  shape(m.A3, m.n, m.nu * d, "A3");
  shape(m.A4, m.nu, m.n, "A4");
  shape(m.A5, m.nu, m.nu, "A5");
  if (!issues.empty()) return issues;

  const double rho = m.A5.eigenvalues().cwiseAbs().maxCoeff();
  if (rho >= 1.0)
    issues.push_back("spectral radius of A5 is " + std::to_string(rho) +
                     " (>= 1); the difference channel is not input-to-state stable");

  try {
    gram_matrix(m.basis, WeightFn::one(), Interval(-m.r, 0.0), cfg);
  } catch (const LinearDependenceError& e) {
    issues.push_back(std::string("Gram singular: ") + e.what());
  }

  if (!m.basis.has_companion()) {
    issues.push_back("basis has no companion matrix");
  } else {
    const double res = m.basis.companion_residual();
    if (res >= 1e-6)
      issues.push_back("companion residual " + std::to_string(res) +
                       " exceeds 1e-6");
  }
  return issues;
}

namespace {

struct Stepper {
  const CddsModel& m;
  int K;
  double h;
  std::vector<Matrix> kernel;  // A3 F(tau_j) at grid lags, j = 0..K
  std::vector<double> trap_w;  // trapezoid weights (h, halved at the ends)

  Stepper(const CddsModel& model, int steps) : m(model), K(steps) {
    h = m.r / K;
    kernel.reserve(K + 1);
    trap_w.assign(K + 1, h);
    trap_w.front() = 0.5 * h;
    trap_w.back() = 0.5 * h;
    for (int j = 0; j <= K; ++j) kernel.push_back(m.kernel_at(-m.r + j * h));
  }

  /// Distributed term for a history window y(t-r)..y(t) given as K+1 values.
  Vector distributed(const std::vector<Vector>& y, std::size_t t_index) const {
    Vector acc = Vector::Zero(m.n);
    for (int j = 0; j <= K; ++j)
      acc += trap_w[j] * (kernel[j] * y[t_index - K + j]);
    return acc;
  }
};

}  // namespace

SimTrace simulate(const CddsModel& m, const InitialCondition& ic, double t_end,
                  int steps_per_delay) {
  if (t_end <= 0) throw std::invalid_argument("simulate: t_end must be positive");
  if (steps_per_delay < 1)
    throw std::invalid_argument("simulate: steps per delay must be positive");
  if (ic.xi.size() != m.n)
    throw std::invalid_argument("simulate: xi dimension mismatch");

  const Stepper st(m, steps_per_delay);
  const int K = steps_per_delay;
  const double h = st.h;
  const long nsteps = static_cast<long>(std::ceil(t_end / h - 1e-9));

  SimTrace trace;
  trace.step = h;

  // History on the grid; phi sampled right-continuously at the nodes, then
  // the node at t0 is overwritten by the difference relation.
  std::vector<Vector> y;
  y.reserve(K + 1 + nsteps);
  for (int j = 0; j <= K; ++j) {
    Vector v = ic.phi(-m.r + j * h);
    if (v.size() != m.nu)
      throw std::invalid_argument("simulate: phi dimension mismatch");
    y.push_back(std::move(v));
  }
  const Vector phi_mr = y.front();
  Vector x = ic.xi;
  y.back() = m.A4 * x + m.A5 * phi_mr;

  trace.times.push_back(0.0);
  trace.x.push_back(x);
  trace.y.push_back(y.back());

  auto deriv = [&](const Vector& xv, const Vector& u) -> Vector {
    return m.A1 * xv + u;
  };

  for (long k = 0; k < nsteps; ++k) {
    const std::size_t ti = y.size() - 1;  // index of y(t_k)
    const Vector u_k = m.A2 * y[ti - K] + st.distributed(y, ti);

    // predict x(t+h) with the input held, then the next y and input
    Vector k1 = deriv(x, u_k);
    Vector k2 = deriv(x + 0.5 * h * k1, u_k);
    Vector k3 = deriv(x + 0.5 * h * k2, u_k);
    Vector k4 = deriv(x + h * k3, u_k);
    const Vector x_pred = x + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    const Vector y_pred = m.A4 * x_pred + m.A5 * y[ti + 1 - K];

    y.push_back(y_pred);
    const Vector u_next = m.A2 * y[ti + 1 - K] + st.distributed(y, ti + 1);
    y.pop_back();
    const Vector u_mid = 0.5 * (u_k + u_next);

    // corrected step with the input interpolated across the stage times
    k1 = deriv(x, u_k);
    k2 = deriv(x + 0.5 * h * k1, u_mid);
    k3 = deriv(x + 0.5 * h * k2, u_mid);
    k4 = deriv(x + h * k3, u_next);
    x = x + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);

    y.push_back(m.A4 * x + m.A5 * y[ti + 1 - K]);

    trace.times.push_back((k + 1) * h);
    trace.x.push_back(x);
    trace.y.push_back(y.back());

    if (x.norm() + y.back().norm() > kDivergenceThreshold) {
      trace.diverged = true;
      break;
    }
  }
  return trace;
}

SimTrace simulate(const CddsModel& m, const InitialCondition& ic, double t_end,
                  double step) {
  if (step <= 0) throw std::invalid_argument("simulate: step must be positive");
  const double ratio = m.r / step;
  const long K = std::lround(ratio);
  if (K < 1 || std::abs(ratio - static_cast<double>(K)) > 1e-9 * ratio)
    throw std::invalid_argument("simulate: step must divide the delay exactly");
  return simulate(m, ic, t_end, static_cast<int>(K));
}

}  // namespace delaycert
