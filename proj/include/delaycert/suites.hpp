#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "delaycert/inequality.hpp"

namespace delaycert {

/**
 * Randomized falsification suites for the three lower-bound families and the
 * optimality/equivalence claims. Instances draw bases from the built-in
 * families (d <= 5), power weights with p in {0,1,2}, polynomial plus trig
 * signals with coefficients in [-2,2], and U = A^T A + 1e-3 I. Each record
 * carries its seed so failures are reproducible in isolation.
 */
struct SuiteOptions {
  int count = 100;
  std::uint64_t seed0 = 1;
  int workers = 1;
  double tol = 1e-9;
};

struct SuiteRecord {
  std::uint64_t seed = 0;
  std::string family;
  double lhs = 0.0;
  double bound = 0.0;
  double gap = 0.0;
  bool pass = false;
};

/// lhs >= bound - tol * max(1, |lhs|) on random instances. Free-matrix and
/// reduced kinds draw admissible certificates from the Schur boundary plus
/// PSD noise.
std::vector<SuiteRecord> dominance_suite(BoundKind kind, const SuiteOptions& opt);

struct ChainRecord {
  std::uint64_t seed = 0;
  double free_bound = 0.0;
  double cor2_bound = 0.0;
  double gram_bnd = 0.0;
  bool pass = false;
};

/// free <= cor2 (same Xhat, boundary Y) <= gram, each with tol slack,
/// on admissible random certificates with Upsilon z equal to the moment.
std::vector<ChainRecord> ordering_chain_suite(const SuiteOptions& opt);

struct OptimalityRecord {
  std::uint64_t seed = 0;
  double rel_gap_free = 0.0;
  double rel_gap_cor2 = 0.0;
  bool pass = false;
};

/// optimal_completion closes both gaps to tol relative.
std::vector<OptimalityRecord> optimality_suite(const SuiteOptions& opt);

struct LeastSquaresRecord {
  std::uint64_t seed = 0;
  bool minimum_beats_perturbations = false;
  double identity_rel_err = 0.0;
  bool pass = false;
};

/// The least-squares coefficient beats `perturbations` random perturbations
/// of norm 1e-3..1e-1, and lhs - gram_bound equals the U-weighted residual
/// energy at the optimum to tol relative.
std::vector<LeastSquaresRecord> least_squares_suite(const SuiteOptions& opt,
                                                    int perturbations = 20);

struct EqualityRecord {
  std::uint64_t seed = 0;
  double rel_gap = 0.0;
  bool pass = false;
};

/// Signals of the form x = F^T omega give gap <= tol * lhs.
std::vector<EqualityRecord> equality_case_suite(const SuiteOptions& opt,
                                                double tol = 1e-10);

/// gram_bound is invariant under f -> G f for random invertible G,
/// to tol relative.
std::vector<EqualityRecord> transform_invariance_suite(const SuiteOptions& opt,
                                                       double tol = 1e-10);

}  // namespace delaycert
