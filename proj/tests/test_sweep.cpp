#include <doctest.h>

#include "delaycert/sweep.hpp"

using namespace delaycert;

namespace {

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

}  // namespace

TEST_CASE("grid construction") {
  const auto grid = make_grid(0.001, 0.001, 2.5);
  CHECK(grid.size() == 2500);
  CHECK(grid.front() == doctest::Approx(0.001));
  CHECK(grid.back() == doctest::Approx(2.5));
  CHECK_THROWS_AS(make_grid(0.0, 0.1, 1.0), std::invalid_argument);
}

TEST_CASE("interval extraction is run-length encoding of feasible runs") {
  using V = Verdict;
  const std::vector<double> r{1, 2, 3, 4, 5, 6};
  const std::vector<V> v{V::infeasible, V::feasible,     V::feasible,
                         V::inconclusive, V::feasible,   V::feasible};
  const auto iv = extract_intervals(r, v);
  REQUIRE(iv.size() == 2);
  CHECK(iv[0].first == 2);
  CHECK(iv[0].second == 3);
  CHECK(iv[1].first == 5);
  CHECK(iv[1].second == 6);

  CHECK(extract_intervals({1.0}, {V::infeasible}).empty());
  const auto single = extract_intervals({0.13}, {V::feasible});
  REQUIRE(single.size() == 1);
  CHECK(single[0].first == 0.13);
  CHECK(single[0].second == 0.13);
}

TEST_CASE("single-point sweep produces a degenerate interval") {
  SweepSpec spec;
  spec.r_values = {0.13};
  const SweepReport rep = run_sweep(cosine_model(0.13), spec);
  REQUIRE(rep.intervals.size() == 1);
  CHECK(rep.intervals[0].first == 0.13);
  CHECK(rep.intervals[0].second == 0.13);
  CHECK(rep.variable_count == 12);
}

TEST_CASE("boundary window around the first stable interval") {
  SweepSpec spec;
  spec.r_values = make_grid(0.080, 0.001, 0.090);
  spec.parallelism = 4;
  const CddsModel m = cosine_model(0.085);
  GramCache cache(m.basis);
  const SweepReport a = run_sweep(m, spec, &cache);

  // the first window opens at 0.084 on this grid
  for (std::size_t i = 0; i < a.r_values.size(); ++i) {
    const bool expect_feasible = a.r_values[i] >= 0.0835;
    CHECK(a.verdicts[i] ==
          (expect_feasible ? Verdict::feasible : Verdict::infeasible));
  }

  SweepSpec spec_b = spec;
  spec_b.condition = Condition::cond_34_35;
  const SweepReport b = run_sweep(m, spec_b, &cache);
  CHECK(compare_reports(a, b).empty());

  SweepSpec spec_g = spec;
  spec_g.G = (Matrix(3, 3) << 1, 0.5, 0.2, 0, 2, -1, 0, 0, 2).finished();
  const SweepReport c = run_sweep(m, spec_g, &cache);
  CHECK(compare_reports(a, c).empty());
}

TEST_CASE("reports are deterministic and comparable") {
  SweepSpec spec;
  spec.r_values = make_grid(0.100, 0.010, 0.160);
  spec.parallelism = 3;
  const CddsModel m = cosine_model(0.1);
  const SweepReport r1 = run_sweep(m, spec);
  const SweepReport r2 = run_sweep(m, spec);
  CHECK(compare_reports(r1, r2).empty());
  CHECK(r1.verdicts == r2.verdicts);

  SweepSpec other = spec;
  other.r_values = make_grid(0.100, 0.010, 0.150);
  const SweepReport r3 = run_sweep(m, other);
  CHECK_THROWS_AS(compare_reports(r1, r3), std::invalid_argument);
}

TEST_CASE("bad grids are rejected") {
  SweepSpec spec;
  spec.r_values = {0.2, 0.1};
  CHECK_THROWS_AS(run_sweep(cosine_model(0.1), spec), std::invalid_argument);
  spec.r_values = {};
  CHECK_THROWS_AS(run_sweep(cosine_model(0.1), spec), std::invalid_argument);
}
