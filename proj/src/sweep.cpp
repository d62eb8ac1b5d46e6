#include "delaycert/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

namespace delaycert {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::feasible:
      return "feasible";
    case Verdict::infeasible:
      return "infeasible";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "?";
}

std::vector<double> make_grid(double start, double step, double stop) {
  if (step <= 0 || start <= 0 || stop < start)
    throw std::invalid_argument("make_grid: need 0 < start <= stop, step > 0");
  std::vector<double> out;
  const long count = std::lround(std::floor((stop - start) / step + 1e-9)) + 1;
  out.reserve(count);
  for (long i = 0; i < count; ++i) out.push_back(start + i * step);
  return out;
}

std::vector<std::pair<double, double>> extract_intervals(
    const std::vector<double>& r_values, const std::vector<Verdict>& verdicts) {
  if (r_values.size() != verdicts.size())
    throw std::invalid_argument("extract_intervals: size mismatch");
  std::vector<std::pair<double, double>> out;
  std::size_t i = 0;
  while (i < verdicts.size()) {
    if (verdicts[i] == Verdict::feasible) {
      std::size_t j = i;
      while (j + 1 < verdicts.size() && verdicts[j + 1] == Verdict::feasible)
        ++j;
      out.emplace_back(r_values[i], r_values[j]);
      i = j + 1;
    } else {
      ++i;
    }
  }
  return out;
}

const GramCache::Entry& GramCache::at(double r, const QuadratureConfig& cfg) {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(r);
    if (it != cache_.end()) return it->second;
  }
  Entry entry;
  try {
    const Interval domain(-r, 0.0);
    entry.gram = gram_matrix(basis_.with_domain(domain), WeightFn::one(),
                             domain, cfg);
  } catch (const std::exception& e) {
    entry.error = e.what();
  }
  std::lock_guard<std::mutex> lock(mutex_);
  return cache_.emplace(r, std::move(entry)).first->second;
}

SweepReport run_sweep(const CddsModel& model, const SweepSpec& spec,
                      GramCache* shared_cache) {
  if (spec.r_values.empty())
    throw std::invalid_argument("run_sweep: empty grid");
  for (std::size_t i = 0; i < spec.r_values.size(); ++i) {
    if (spec.r_values[i] <= 0)
      throw std::invalid_argument("run_sweep: grid values must be positive");
    if (i > 0 && spec.r_values[i] <= spec.r_values[i - 1])
      throw std::invalid_argument("run_sweep: grid must be strictly increasing");
  }
  const int d = model.basis.dim();
  const TransformChoice g = spec.G.size() == 0
                                ? TransformChoice::identity(d)
                                : TransformChoice{spec.G};
  g.validate();

  const auto t0 = std::chrono::steady_clock::now();
  const QuadratureConfig qcfg;

  GramCache local_cache(model.basis);
  GramCache& cache = shared_cache ? *shared_cache : local_cache;

  const std::size_t count = spec.r_values.size();
  SweepReport rep;
  rep.r_values = spec.r_values;
  rep.verdicts.assign(count, Verdict::inconclusive);
  rep.min_margins.assign(count, 0.0);
  rep.notes.assign(count, "");

  std::atomic<int> var_count{0};
  auto solve_one = [&](std::size_t i) {
    const double r = spec.r_values[i];
    const auto& entry = cache.at(r, qcfg);
    if (!entry.gram) {
      rep.verdicts[i] = Verdict::inconclusive;
      rep.notes[i] = "model invalid: " + entry.error;
      return;
    }
    try {
      const CddsModel m = model.with_delay(r);
      const LmiProblem problem =
          spec.condition == Condition::cond_32_33
              ? build_condition_32_33(m, g, *entry.gram)
              : build_condition_34_35(m, g, *entry.gram);
      var_count.store(problem.num_decision_vars());
      const FeasibilityResult res = solve_feasibility(problem, spec.solver);
      switch (res.status) {
        case FeasStatus::feasible:
          rep.verdicts[i] = Verdict::feasible;
          break;
        case FeasStatus::infeasible:
          rep.verdicts[i] = Verdict::infeasible;
          break;
        case FeasStatus::inconclusive:
          rep.verdicts[i] = Verdict::inconclusive;
          rep.notes[i] = "solver: " + res.note;
          break;
      }
      if (!res.margins.empty()) {
        double worst = res.margins.front();
        for (double v : res.margins) worst = std::min(worst, v);
        rep.min_margins[i] = worst;
      }
    } catch (const std::exception& e) {
      rep.verdicts[i] = Verdict::inconclusive;
      rep.notes[i] = std::string("error: ") + e.what();
    }
  };

  const int workers = std::max(1, spec.parallelism);
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) solve_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t)
      pool.emplace_back([&]() {
        for (std::size_t i = next.fetch_add(1); i < count;
             i = next.fetch_add(1))
          solve_one(i);
      });
    for (auto& th : pool) th.join();
  }

  rep.intervals = extract_intervals(rep.r_values, rep.verdicts);
  rep.variable_count = var_count.load();
  rep.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rep;
}

SweepDiff compare_reports(const SweepReport& a, const SweepReport& b) {
  if (a.r_values.size() != b.r_values.size())
    throw std::invalid_argument("compare_reports: grids differ in size");
  for (std::size_t i = 0; i < a.r_values.size(); ++i)
    if (std::abs(a.r_values[i] - b.r_values[i]) >
        1e-12 * std::max(1.0, std::abs(a.r_values[i])))
      throw std::invalid_argument("compare_reports: grids differ");
  SweepDiff diff;
  for (std::size_t i = 0; i < a.verdicts.size(); ++i)
    if (a.verdicts[i] != b.verdicts[i]) {
      diff.indices.push_back(static_cast<int>(i));
      diff.r_values.push_back(a.r_values[i]);
    }
  return diff;
}

namespace {

Verdict verdict_at(const CddsModel& model, const SweepSpec& spec, double r) {
  SweepSpec one = spec;
  one.r_values = {r};
  one.parallelism = 1;
  return run_sweep(model, one).verdicts.front();
}

}  // namespace

std::vector<std::pair<double, double>> refine_intervals(
    const CddsModel& model, const SweepSpec& spec, const SweepReport& report,
    double resolution) {
  std::vector<std::pair<double, double>> out;
  const double grid_lo = report.r_values.front();
  const double grid_hi = report.r_values.back();
  const double step =
      report.r_values.size() > 1 ? report.r_values[1] - report.r_values[0]
                                 : 0.0;
  for (auto [lo, hi] : report.intervals) {
    double a_out = lo, b_out = hi;
    if (lo > grid_lo && step > 0) {
      double bad = lo - step, good = lo;
      while (good - bad > resolution) {
        const double mid = 0.5 * (bad + good);
        (verdict_at(model, spec, mid) == Verdict::feasible ? good : bad) = mid;
      }
      a_out = good;
    }
    if (hi < grid_hi && step > 0) {
      double good = hi, bad = hi + step;
      while (bad - good > resolution) {
        const double mid = 0.5 * (bad + good);
        (verdict_at(model, spec, mid) == Verdict::feasible ? good : bad) = mid;
      }
      b_out = good;
    }
    out.emplace_back(a_out, b_out);
  }
  return out;
}

}  // namespace delaycert
