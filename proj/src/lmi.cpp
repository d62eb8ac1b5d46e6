#include "delaycert/lmi.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "delaycert/matalg.hpp"

namespace delaycert {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
}

Vector LmiProblem::pack_sym(const SymMat& s) {
  const int p = s.dim();
  Vector out(p * (p + 1) / 2);
  int idx = 0;
  for (int j = 0; j < p; ++j) {
    out(idx++) = s(j, j);
    for (int i = j + 1; i < p; ++i) out(idx++) = kSqrt2 * s(i, j);
  }
  return out;
}

SymMat LmiProblem::unpack_sym(const Vector& packed, int dim) {
  if (packed.size() != dim * (dim + 1) / 2)
    throw std::invalid_argument("unpack_sym: packed size mismatch");
  SymMat s(dim);
  int idx = 0;
  for (int j = 0; j < dim; ++j) {
    s.set(j, j, packed(idx++));
    for (int i = j + 1; i < dim; ++i) s.set(i, j, packed(idx++) / kSqrt2);
  }
  return s;
}

Vector LmiProblem::pack(const std::vector<SymMat>& assignment) const {
  if (assignment.size() != variables_.size())
    throw std::invalid_argument("pack: assignment block count mismatch");
  Vector out(num_decision_vars());
  int offset = 0;
  for (std::size_t b = 0; b < variables_.size(); ++b) {
    if (assignment[b].dim() != variables_[b].dim)
      throw std::invalid_argument("pack: block dim mismatch for " +
                                  variables_[b].name);
    out.segment(offset, variables_[b].packed_size()) =
        pack_sym(assignment[b]);
    offset += variables_[b].packed_size();
  }
  return out;
}

std::vector<SymMat> LmiProblem::unpack(const Vector& theta) const {
  if (theta.size() != num_decision_vars())
    throw std::invalid_argument("unpack: theta size mismatch");
  std::vector<SymMat> out;
  out.reserve(variables_.size());
  int offset = 0;
  for (const auto& v : variables_) {
    out.push_back(unpack_sym(theta.segment(offset, v.packed_size()), v.dim));
    offset += v.packed_size();
  }
  return out;
}

Matrix LmiProblem::constraint_value(int k, const Vector& theta) const {
  const LmiConstraint& c = constraints_.at(k);
  Matrix val = c.constant;
  for (int i = 0; i < theta.size(); ++i)
    if (theta(i) != 0.0) val += theta(i) * c.coeffs[i];
  return val;
}

namespace {

nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const nlohmann::json& j) {
  const int rows = static_cast<int>(j.size());
  const int cols = rows > 0 ? static_cast<int>(j.at(0).size()) : 0;
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int c = 0; c < cols; ++c) m(i, c) = j.at(i).at(c).get<double>();
  return m;
}

}  // namespace

std::string LmiProblem::to_json() const {
  nlohmann::json j;
  j["format"] = "delaycert-lmi-v1";
  j["variables"] = nlohmann::json::array();
  for (const auto& v : variables_)
    j["variables"].push_back({{"name", v.name}, {"dim", v.dim}});
  j["constraints"] = nlohmann::json::array();
  for (const auto& c : constraints_) {
    nlohmann::json jc;
    jc["name"] = c.name;
    jc["sense"] = c.sense == Sense::geq_eps ? "geq_eps" : "leq_minus_eps";
    jc["dim"] = c.dim;
    jc["eps"] = c.eps;
    jc["constant"] = matrix_to_json(c.constant);
    jc["coeffs"] = nlohmann::json::array();
    for (const auto& b : c.coeffs) jc["coeffs"].push_back(matrix_to_json(b));
    j["constraints"].push_back(std::move(jc));
  }
  return j.dump(1);
}

LmiProblem LmiProblem::from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  if (j.value("format", "") != "delaycert-lmi-v1")
    throw std::invalid_argument("LmiProblem: unknown dump format");
  std::vector<VarBlock> vars;
  for (const auto& jv : j.at("variables"))
    vars.push_back({jv.at("name").get<std::string>(), jv.at("dim").get<int>()});
  std::vector<LmiConstraint> cons;
  for (const auto& jc : j.at("constraints")) {
    LmiConstraint c;
    c.name = jc.at("name").get<std::string>();
    c.sense = jc.at("sense").get<std::string>() == "geq_eps"
                  ? Sense::geq_eps
                  : Sense::leq_minus_eps;
    c.dim = jc.at("dim").get<int>();
    c.eps = jc.at("eps").get<double>();
    c.constant = matrix_from_json(jc.at("constant"));
    for (const auto& jb : jc.at("coeffs"))
      c.coeffs.push_back(matrix_from_json(jb));
    cons.push_back(std::move(c));
  }
  return LmiProblem(std::move(vars), std::move(cons));
}

bool affinity_probe(const AffineMap& map, const std::vector<VarBlock>& vars,
                    std::uint64_t seed, int trials, double tol) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  int total = 0;
  for (const auto& v : vars) total += v.packed_size();
  auto random_assignment = [&]() {
    std::vector<SymMat> out;
    for (const auto& v : vars) {
      Vector p(v.packed_size());
      for (int i = 0; i < p.size(); ++i) p(i) = dist(rng);
      out.push_back(LmiProblem::unpack_sym(p, v.dim));
    }
    return out;
  };
  std::vector<SymMat> zero;
  for (const auto& v : vars) zero.push_back(SymMat(v.dim));
  const Matrix m0 = map(zero);
  for (int t = 0; t < trials; ++t) {
    const auto v1 = random_assignment();
    const auto v2 = random_assignment();
    const double alpha = dist(rng), beta = dist(rng);
    std::vector<SymMat> mix;
    for (std::size_t b = 0; b < vars.size(); ++b)
      mix.push_back(SymMat::symmetrize(alpha * v1[b].mat() + beta * v2[b].mat()));
    const Matrix lhs = map(mix);
    const Matrix rhs =
        alpha * map(v1) + beta * map(v2) - (alpha + beta - 1.0) * m0;
    const double scale = std::max(1.0, rhs.cwiseAbs().maxCoeff());
    if ((lhs - rhs).cwiseAbs().maxCoeff() > tol * scale) return false;
  }
  return true;
}

LmiConstraint constraint_from_map(const std::string& name, Sense sense,
                                  const std::vector<VarBlock>& vars,
                                  const AffineMap& map, double eps_scale) {
  std::vector<SymMat> zero;
  for (const auto& v : vars) zero.push_back(SymMat(v.dim));
  LmiConstraint c;
  c.name = name;
  c.sense = sense;
  c.constant = map(zero);
  if (c.constant.rows() != c.constant.cols())
    throw std::invalid_argument("constraint_from_map: map must be square");
  c.dim = static_cast<int>(c.constant.rows());
  c.eps = eps_scale * (1.0 + c.constant.cwiseAbs().maxCoeff());

  int total = 0;
  for (const auto& v : vars) total += v.packed_size();
  c.coeffs.reserve(total);
  for (std::size_t b = 0; b < vars.size(); ++b) {
    for (int i = 0; i < vars[b].packed_size(); ++i) {
      auto unit = zero;
      Vector e = Vector::Zero(vars[b].packed_size());
      e(i) = 1.0;
      unit[b] = LmiProblem::unpack_sym(e, vars[b].dim);
      c.coeffs.push_back(map(unit) - c.constant);
    }
  }
  return c;
}

std::string to_string(FeasStatus s) {
  switch (s) {
    case FeasStatus::feasible:
      return "feasible";
    case FeasStatus::infeasible:
      return "infeasible";
    case FeasStatus::inconclusive:
      return "inconclusive";
  }
  return "?";
}

namespace {

/// Flipped, scaled constraint data: F(theta) = base + sum theta_i coeff_i,
/// feasibility meaning F(theta) >= 0 for every block.
struct FlippedBlock {
  Matrix base;
  std::vector<Matrix> coeffs;
  int dim = 0;
};

struct Workspace {
  std::vector<Eigen::LLT<Matrix>> llt;
  std::vector<Matrix> w;  // inverses of F_k + s I
  bool factorize(const std::vector<FlippedBlock>& blocks, const Vector& theta,
                 double s) {
    llt.resize(blocks.size());
    for (std::size_t k = 0; k < blocks.size(); ++k) {
      Matrix p = blocks[k].base;
      for (int i = 0; i < theta.size(); ++i)
        if (theta(i) != 0.0) p += theta(i) * blocks[k].coeffs[i];
      p.diagonal().array() += s;
      llt[k].compute(p);
      if (llt[k].info() != Eigen::Success) return false;
    }
    return true;
  }
  double log_det_sum() const {
    double acc = 0.0;
    for (const auto& f : llt) {
      const auto& l = f.matrixLLT();
      for (int i = 0; i < l.rows(); ++i) acc += 2.0 * std::log(l(i, i));
    }
    return acc;
  }
  void invert() {
    w.resize(llt.size());
    for (std::size_t k = 0; k < llt.size(); ++k)
      w[k] = llt[k].solve(Matrix::Identity(llt[k].matrixLLT().rows(),
                                           llt[k].matrixLLT().rows()));
  }
};

double signed_margin(const LmiConstraint& c, const Matrix& value) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(
      SymMat::symmetrize(value).mat(), Eigen::EigenvaluesOnly);
  if (c.sense == Sense::geq_eps) return es.eigenvalues().minCoeff();
  return -es.eigenvalues().maxCoeff();
}

}  // namespace

FeasibilityResult solve_feasibility(const LmiProblem& p,
                                    const SolverOptions& opt) {
  const int m = p.num_decision_vars();
  const auto& cons = p.constraints();
  if (cons.empty())
    throw std::invalid_argument("solve_feasibility: no constraints");
  for (const auto& c : cons) {
    if (static_cast<int>(c.coeffs.size()) != m)
      throw std::invalid_argument(
          "solve_feasibility: coefficient count does not match variables");
    if (c.constant.rows() != c.dim || c.constant.cols() != c.dim)
      throw std::invalid_argument("solve_feasibility: malformed constant");
  }

  // Flip senses so every block must become PSD, fold in the margins, and
  // normalize variable directions so coefficient scales are comparable.
  Vector dir_scale = Vector::Ones(m);
  for (int i = 0; i < m; ++i) {
    double worst = 0.0;
    for (const auto& c : cons)
      worst = std::max(worst, c.coeffs[i].cwiseAbs().maxCoeff());
    dir_scale(i) = worst > 0.0 ? worst : 1.0;
  }

  std::vector<FlippedBlock> blocks;
  int total_dim = 0;
  for (const auto& c : cons) {
    const double sgn = c.sense == Sense::geq_eps ? 1.0 : -1.0;
    FlippedBlock b;
    b.dim = c.dim;
    Matrix base = sgn * c.constant;
    base.diagonal().array() -= c.eps;
    const double block_scale = std::max(1.0, base.cwiseAbs().maxCoeff());
    b.base = SymMat::symmetrize(base / block_scale).mat();
    b.coeffs.reserve(m);
    for (int i = 0; i < m; ++i)
      b.coeffs.push_back(
          SymMat::symmetrize(sgn * c.coeffs[i] / (dir_scale(i) * block_scale))
              .mat());
    blocks.push_back(std::move(b));
    total_dim += c.dim;
  }

  FeasibilityResult res;

  auto margins_of = [&](const Vector& theta_scaled) {
    std::vector<double> out(cons.size());
    Vector theta = theta_scaled.cwiseQuotient(dir_scale);
    for (std::size_t k = 0; k < cons.size(); ++k)
      out[k] = signed_margin(cons[k], p.constraint_value(static_cast<int>(k),
                                                         theta));
    return out;
  };

  auto finish_feasible = [&](const Vector& theta_scaled) -> bool {
    const Vector theta = theta_scaled.cwiseQuotient(dir_scale);
    const auto margins = margins_of(theta_scaled);
    for (std::size_t k = 0; k < cons.size(); ++k)
      if (margins[k] < cons[k].eps / 2) return false;
    res.status = FeasStatus::feasible;
    res.witness = p.unpack(theta);
    res.margins = margins;
    return true;
  };

  // Strictly feasible start for the slack formulation.
  Vector theta = Vector::Zero(m);
  double s = 0.0;
  {
    double worst = 0.0;
    for (const auto& b : blocks) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(b.base, Eigen::EigenvaluesOnly);
      worst = std::min(worst, es.eigenvalues().minCoeff());
    }
    s = -worst + 1.0;
  }

  Workspace ws;
  if (!ws.factorize(blocks, theta, s)) {
    res.note = "initial factorization failed";
    return res;
  }

  double mu = opt.mu_initial;
  int newton_total = 0;

  while (mu >= opt.mu_min && newton_total < opt.max_newton_total) {
    bool centered = false;
    for (int it = 0; it < opt.max_newton_per_stage &&
                     newton_total < opt.max_newton_total;
         ++it, ++newton_total) {
      ws.invert();

      // gradient and Hessian of s - mu * sum log det(F_k + s I)
      Vector grad = Vector::Zero(m + 1);
      Matrix hess = Matrix::Zero(m + 1, m + 1);
      grad(m) = 1.0;
      std::vector<std::vector<Matrix>> t(blocks.size());
      for (std::size_t k = 0; k < blocks.size(); ++k) {
        const Matrix& w = ws.w[k];
        t[k].resize(m + 1);
        for (int i = 0; i < m; ++i) t[k][i] = w * blocks[k].coeffs[i];
        t[k][m] = w;
        for (int i = 0; i < m; ++i) grad(i) -= mu * t[k][i].trace();
        grad(m) -= mu * w.trace();
        for (int i = 0; i <= m; ++i)
          for (int j = i; j <= m; ++j) {
            const double v =
                mu * (t[k][i].array() * t[k][j].transpose().array()).sum();
            hess(i, j) += v;
            if (i != j) hess(j, i) += v;
          }
      }
      hess.diagonal().array() += 1e-13 * std::max(1.0, hess.diagonal().maxCoeff());

      const Vector step = hess.ldlt().solve(-grad);
      const double decrement = -grad.dot(step);
      if (!(decrement > 0) || !step.allFinite()) break;  // numerically stuck

      // backtracking line search keeping every block factorizable
      const double phi0 = s - mu * ws.log_det_sum();
      double tstep = 1.0;
      bool moved = false;
      while (tstep > 1e-12) {
        const Vector theta_try = theta + tstep * step.head(m);
        const double s_try = s + tstep * step(m);
        Workspace trial;
        if (trial.factorize(blocks, theta_try, s_try)) {
          const double phi_try = s_try - mu * trial.log_det_sum();
          if (phi_try <= phi0 - 0.01 * tstep * decrement) {
            theta = theta_try;
            s = s_try;
            ws = std::move(trial);
            moved = true;
            break;
          }
        }
        tstep *= 0.5;
      }
      if (!moved) break;  // no acceptable step at this stage
      if (s < 0.0 && finish_feasible(theta)) {
        res.newton_iterations = newton_total + 1;
        res.final_mu = mu;
        return res;
      }
      if (decrement < opt.newton_tol) {
        centered = true;
        break;
      }
    }

    // stage end: explicit feasibility check on the actual margins
    if (finish_feasible(theta)) {
      res.newton_iterations = newton_total;
      res.final_mu = mu;
      return res;
    }
    // centered duality bound: s* >= s - mu * total_dim at an exact center
    if (centered && s - opt.infeas_safety * mu * total_dim > 0.0) {
      res.status = FeasStatus::infeasible;
      res.margins = margins_of(theta);
      res.newton_iterations = newton_total;
      res.final_mu = mu;
      return res;
    }
    mu *= opt.mu_factor;
  }

  res.status = FeasStatus::inconclusive;
  res.margins = margins_of(theta);
  res.newton_iterations = newton_total;
  res.final_mu = mu;
  res.note = newton_total >= opt.max_newton_total ? "newton budget exhausted"
                                                  : "mu floor reached";
  return res;
}

}  // namespace delaycert
