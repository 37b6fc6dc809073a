#pragma once

// Lower-bound search for the Bellman supremum: the extremal profile is placed
// on the leaves of a binary tree in many orders and the best int (M phi)^p is
// kept. Reordering leaf values keeps both moments fixed, so every candidate is
// feasible for the same (f, F_achieved).

#include <cstddef>
#include <cstdint>
#include <vector>

#include "maxtree/tree_space.hpp"

namespace maxtree {

inline constexpr int kMaxOracleDepth = 20;

struct OracleResult {
  double best_value = 0.0;        // max of int (M phi)^p found
  double bellman_target = 0.0;    // B(f, F)
  double bellman_achieved = 0.0;  // B(f_achieved, F_achieved) >= best_value
  double f_achieved = 0.0;
  double F_achieved = 0.0;
  double alpha = 1.0;             // omega_p(f^p / F) of the requested point
  /// 0: identity order, 1..budget: random orders, budget + 1: after swaps.
  std::size_t best_sample = 0;
  std::uint64_t best_seed = 0;    // seed of the random order the search kept
  double identity_value = 0.0;
  std::size_t swaps_attempted = 0;
  std::size_t swaps_accepted = 0;
  int depth = 0;
  std::vector<double> best_leaf_values;  // leaf order of the best candidate
};

/// Candidates: the discretized extremal in leaf order, `budget` uniformly random
/// leaf orders, then 4 * budget greedy pairwise swaps starting from the best
/// order (kept only when int (M phi)^p strictly increases). Throws
/// InfeasibleMomentsError when f^p > F and DomainError for depth outside
/// [0, kMaxOracleDepth].
OracleResult oracle_sup(double p, double f, double F, int depth, std::size_t budget,
                        std::uint64_t seed, unsigned threads = 0);

/// int (M phi)^p.
double maximal_power_integral(const StepFunction& phi, double p);

}  // namespace maxtree
