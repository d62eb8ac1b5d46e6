#pragma once

#include <map>
#include <mutex>
#include <optional>

#include "delaycert/stability.hpp"

namespace delaycert {

enum class Condition { cond_32_33, cond_34_35 };

enum class Verdict { feasible, infeasible, inconclusive };

std::string to_string(Verdict v);

struct SweepSpec {
  std::vector<double> r_values;  // strictly increasing, all positive
  Condition condition = Condition::cond_32_33;
  Matrix G;                      // empty means identity
  int parallelism = 1;
  SolverOptions solver;
};

struct SweepReport {
  std::vector<double> r_values;
  std::vector<Verdict> verdicts;
  std::vector<double> min_margins;  // smallest signed margin at that r
  std::vector<std::string> notes;   // nonempty for inconclusive points
  std::vector<std::pair<double, double>> intervals;  // maximal feasible runs
  int variable_count = 0;
  double wall_time_seconds = 0.0;
};

/// Uniform grid start, start+step, ..., up to stop (inclusive within 1e-12).
std::vector<double> make_grid(double start, double step, double stop);

/// Maximal runs of feasible grid points; inconclusive points break runs.
std::vector<std::pair<double, double>> extract_intervals(
    const std::vector<double>& r_values, const std::vector<Verdict>& verdicts);

/// Per-delay cache of the unweighted Gram on [-r, 0], shareable across
/// sweeps of both conditions. Thread safe.
class GramCache {
 public:
  explicit GramCache(const BasisSet& basis) : basis_(basis) {}

  /// Gram for delay r, or the validation failure message.
  struct Entry {
    std::optional<GramData> gram;
    std::string error;
  };
  const Entry& at(double r, const QuadratureConfig& cfg);

 private:
  BasisSet basis_;
  std::map<double, Entry> cache_;
  std::mutex mutex_;
};

/**
 * Evaluates the chosen stability condition over the delay grid. The model's
 * delay and basis domain are rebound per grid point; grid points whose model
 * fails validation are recorded as inconclusive with the reason. Verdict
 * order is deterministic regardless of the worker count.
 */
SweepReport run_sweep(const CddsModel& model, const SweepSpec& spec,
                      GramCache* shared_cache = nullptr);

struct SweepDiff {
  std::vector<int> indices;    // grid positions with differing verdicts
  std::vector<double> r_values;

  bool empty() const { return indices.empty(); }
};

/// Differing grid points of two reports over the same grid.
/// Throws std::invalid_argument on grid mismatch.
SweepDiff compare_reports(const SweepReport& a, const SweepReport& b);

/// Bisects each interval boundary to the given resolution. A convenience
/// refinement beyond the plain grid sweep.
std::vector<std::pair<double, double>> refine_intervals(
    const CddsModel& model, const SweepSpec& spec, const SweepReport& report,
    double resolution);

}  // namespace delaycert
