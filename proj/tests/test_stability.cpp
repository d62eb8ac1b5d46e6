#include <doctest.h>

#include <random>

#include "delaycert/stability.hpp"

using namespace delaycert;

namespace {

const QuadratureConfig cfg;

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

GramData gram_of(const CddsModel& m) {
  return gram_matrix(m.basis, WeightFn::one(), Interval(-m.r, 0.0), cfg);
}

Matrix paper_like_transform() {
  Matrix g(3, 3);
  g << 1, 0.5, 0.2, 0, 2, -1, 0, 0, 2;
  return g;
}

}  // namespace

TEST_CASE("structure blocks for the scalar benchmark") {
  const CddsModel m = cosine_model(0.1);
  const GramData g = gram_of(m);
  const StabilityStructure st =
      build_structure(m, TransformChoice::identity(3), g);

  Matrix gamma_want(1, 5);
  gamma_want << 1.0, 0.1, 0, 0, 0;
  CHECK((st.Gamma - gamma_want).cwiseAbs().maxCoeff() == 0.0);

  CHECK((st.M_hat - m.basis.companion()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((st.gram_g_inv.mat() - g.gram_inv.mat()).cwiseAbs().maxCoeff() == 0.0);

  CHECK(st.H.rows() == 5);
  CHECK(st.H.cols() == 4);
  CHECK(st.A_bold.rows() == 1);
  CHECK(st.G_bold.rows() == 3);
}

TEST_CASE("transformed kernel block is the inverse gram of G f") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> dist(-1.5, 1.5);
  const CddsModel m = cosine_model(0.35);
  const GramData g = gram_of(m);
  for (int trial = 0; trial < 5; ++trial) {
    Matrix t(3, 3);
    do {
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) t(i, j) = dist(rng);
    } while (std::abs(t.determinant()) < 0.3);
    const StabilityStructure st = build_structure(m, TransformChoice{t}, g);

    const BasisSet base = m.basis;
    const BasisSet transformed = BasisSet::custom(
        3, Interval(-m.r, 0.0),
        [base, t](double tau) -> Vector { return t * base.eval_unchecked(tau); });
    const GramData g2 = gram_matrix(transformed, WeightFn::one(),
                                    Interval(-m.r, 0.0), cfg);
    const double scale =
        std::max(1.0, g2.gram_inv.mat().cwiseAbs().maxCoeff());
    CHECK((st.gram_g_inv.mat() - g2.gram_inv.mat()).cwiseAbs().maxCoeff() <
          1e-10 * scale);
  }
}

TEST_CASE("variable counts: 12 for the plain form, 24 with slack matrices") {
  const CddsModel m = cosine_model(0.1);
  const GramData g = gram_of(m);
  const LmiProblem pa =
      build_condition_32_33(m, TransformChoice::identity(3), g);
  CHECK(pa.num_decision_vars() == 12);
  REQUIRE(pa.constraints().size() == 4);
  CHECK(pa.constraints()[0].dim == 4);
  CHECK(pa.constraints()[1].dim == 1);
  CHECK(pa.constraints()[2].dim == 1);
  CHECK(pa.constraints()[3].dim == 5);

  const LmiProblem pb =
      build_condition_34_35(m, TransformChoice::identity(3), g);
  CHECK(pb.num_decision_vars() == 24);
  REQUIRE(pb.constraints().size() == 4);
  CHECK(pb.constraints()[0].dim == 7);
  CHECK(pb.constraints()[3].dim == 8);
}

TEST_CASE("benchmark verdicts inside and outside the first window") {
  const TransformChoice id = TransformChoice::identity(3);
  {
    const CddsModel m = cosine_model(0.13);
    const GramData g = gram_of(m);
    CHECK(solve_feasibility(build_condition_32_33(m, id, g)).status ==
          FeasStatus::feasible);
    CHECK(solve_feasibility(build_condition_34_35(m, id, g)).status ==
          FeasStatus::feasible);
  }
  {
    const CddsModel m = cosine_model(0.40);
    const GramData g = gram_of(m);
    CHECK(solve_feasibility(build_condition_32_33(m, id, g)).status ==
          FeasStatus::infeasible);
    CHECK(solve_feasibility(build_condition_34_35(m, id, g)).status ==
          FeasStatus::infeasible);
  }
}

TEST_CASE("slack X1 = kernel block recovers the plain energy condition") {
  std::mt19937_64 rng(73);
  std::uniform_real_distribution<double> dist(-1, 1);
  const CddsModel m = cosine_model(0.2);
  const GramData g = gram_of(m);
  const StabilityStructure st =
      build_structure(m, TransformChoice::identity(3), g);

  Matrix ph(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) ph(i, j) = dist(rng);
  const SymMat p_hat = SymMat::symmetrize(ph);
  const double s_val = 0.7;

  // top block of the Schur form with X1 = kernel x S
  const Matrix x1 = s_val * st.gram_g_inv.mat();
  Matrix top = p_hat.mat();
  top.bottomRightCorner(3, 3) += 2.0 * x1;
  const Matrix corner = (Matrix(4, 3) << Matrix::Zero(1, 3), x1).finished();
  const Matrix tail = s_val * st.gram_g_inv.mat();
  const Matrix schur =
      top - corner * tail.llt().solve(corner.transpose());

  Matrix plain = p_hat.mat();
  plain.bottomRightCorner(3, 3) += s_val * st.gram_g_inv.mat();
  CHECK((schur - plain).cwiseAbs().maxCoeff() <
        1e-9 * std::max(1.0, plain.cwiseAbs().maxCoeff()));
}

TEST_CASE("congruence identities: identity transform is exact") {
  const CddsModel m = cosine_model(0.13);
  const GramData g = gram_of(m);
  std::mt19937_64 rng(79);
  std::uniform_real_distribution<double> dist(-1, 1);
  Matrix ph(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) ph(i, j) = dist(rng);
  const SymMat p_hat = SymMat::symmetrize(ph);
  SymMat s(1), u(1);
  s.set(0, 0, 1.3);
  u.set(0, 0, 0.9);

  const CongruenceReport rep =
      congruence_check(m, TransformChoice::identity(3), g, p_hat, s, u);
  CHECK((rep.spectrum_energy_transformed - rep.spectrum_energy_plain)
            .cwiseAbs()
            .maxCoeff() < 1e-12);
  CHECK((rep.spectrum_phi1_transformed - rep.spectrum_phi1_plain)
            .cwiseAbs()
            .maxCoeff() < 1e-12);
  CHECK(rep.energy_match);
  CHECK(rep.phi1_match);
}

TEST_CASE("congruence identities: inertia matches for random transforms") {
  const CddsModel m = cosine_model(0.13);
  const GramData g = gram_of(m);
  std::mt19937_64 rng(83);
  std::uniform_real_distribution<double> dist(-1, 1);

  // include a feasible witness among the assignments
  const FeasibilityResult feas = solve_feasibility(
      build_condition_32_33(m, TransformChoice::identity(3), g));
  REQUIRE(feas.status == FeasStatus::feasible);

  for (int trial = 0; trial < 6; ++trial) {
    Matrix t(3, 3);
    do {
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) t(i, j) = dist(rng);
    } while (std::abs(t.determinant()) < 0.3);
    const TransformChoice tc = trial == 0
                                   ? TransformChoice{paper_like_transform()}
                                   : TransformChoice{t};

    SymMat p_hat(4), s(1), u(1);
    if (trial < 2) {
      p_hat = feas.witness[0];
      s = feas.witness[1];
      u = feas.witness[2];
    } else {
      Matrix ph(4, 4);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) ph(i, j) = dist(rng);
      p_hat = SymMat::symmetrize(ph);
      s.set(0, 0, std::abs(dist(rng)) + 0.1);
      u.set(0, 0, std::abs(dist(rng)) + 0.1);
    }
    const CongruenceReport rep = congruence_check(m, tc, g, p_hat, s, u);
    CHECK(rep.energy_match);
    CHECK(rep.phi1_match);
  }
}

TEST_CASE("assembled problems dump and reload with verdicts intact") {
  for (double r : {0.13, 0.40}) {
    const CddsModel m = cosine_model(r);
    const GramData g = gram_of(m);
    const LmiProblem p =
        build_condition_32_33(m, TransformChoice::identity(3), g);
    const LmiProblem back = LmiProblem::from_json(p.to_json());
    CHECK(solve_feasibility(back).status == solve_feasibility(p).status);
  }
}

TEST_CASE("structure rejects weighted grams and domain mismatches") {
  const CddsModel m = cosine_model(0.1);
  const GramData weighted = gram_matrix(m.basis, WeightFn::power_left(1),
                                        Interval(-0.1, 0.0), cfg);
  CHECK_THROWS_AS(
      build_structure(m, TransformChoice::identity(3), weighted),
      std::invalid_argument);
  CHECK_THROWS_AS(
      build_structure(m, TransformChoice{Matrix::Zero(3, 3)}, gram_of(m)),
      std::invalid_argument);
}
