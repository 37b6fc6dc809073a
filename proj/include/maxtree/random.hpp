#pragma once

// Seeded generation of test functions. Every trial derives its own seed from
// the run seed, so any single trial can be regenerated from its recorded seed.

#include <cstdint>
#include <optional>
#include <random>
#include <span>

#include "maxtree/tree_space.hpp"

namespace maxtree {

using Rng = std::mt19937_64;

/// Well-mixed, never zero.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

struct RandomFunctionOptions {
  /// Rescale the values so that int phi equals this. When unset, a coin flip
  /// decides whether to rescale to a log-uniform target in [0.1, 10].
  std::optional<double> target_mean;
};

/// Leaf values drawn i.i.d. from a per-function mixture of uniform(0, 1),
/// exponential(1) and a two-point law {0, 1/pi} with P(1/pi) = pi, pi
/// log-uniform in [0.005, 0.2]. At least one leaf is positive.
StepFunction random_step_function(const Tree& tree, Rng& rng,
                                  const RandomFunctionOptions& options = {});

/// A tree with arity drawn from `arities` and depth uniform in
/// [min_depth, max_depth], followed by random_step_function on it.
StepFunction random_tree_function(Rng& rng, std::span<const std::size_t> arities,
                                  int min_depth, int max_depth,
                                  const RandomFunctionOptions& options = {});

}  // namespace maxtree
