#include "maxtree/oracle.hpp"

#include <cmath>
#include <random>

#include "maxtree/bellman.hpp"
#include "maxtree/error.hpp"
#include "maxtree/kernels.hpp"
#include "maxtree/maximal_op.hpp"
#include "maxtree/parallel.hpp"
#include "maxtree/random.hpp"
#include "maxtree/rearrangement.hpp"

namespace maxtree {

double maximal_power_integral(const StepFunction& phi, double p) {
  std::vector<double> m = maximal_values(phi);
  kernels::power(m, p, m);
  return phi.tree().integrate(m);
}

OracleResult oracle_sup(double p, double f, double F, int depth, std::size_t budget,
                        std::uint64_t seed, unsigned threads) {
  if (depth < 0 || depth > kMaxOracleDepth) {
    throw DomainError("oracle depth must lie in [0, " + std::to_string(kMaxOracleDepth) +
                      "], got " + std::to_string(depth));
  }
  const BellmanPoint target = bellman_value(p, f, F);
  const Tree tree = build_uniform_tree(2, depth);
  const std::size_t n = tree.leaf_count();

  OracleResult out;
  out.depth = depth;
  out.bellman_target = target.value;
  out.alpha = target.alpha;

  std::vector<double> cells;
  if (target.alpha == 1.0) {
    cells.assign(n, f);
  } else {
    const auto g = PowerLawFunction::from_extremal(target.K, target.alpha);
    const auto step = discretize(g, n);
    cells.assign(step.values().begin(), step.values().end());
  }
  const LineStepFunction profile(
      [&] {
        std::vector<double> t(n + 1);
        for (std::size_t i = 0; i <= n; ++i) t[i] = static_cast<double>(i) / n;
        return t;
      }(),
      cells);

  const StepFunction identity = random_rearrangement(profile, tree, kIdentitySeed);
  out.f_achieved = moment(identity, 1.0);
  out.F_achieved = moment(identity, p);
  out.bellman_achieved = bellman_value(p, out.f_achieved, out.F_achieved).value;

  if (threads == 0) threads = configured_threads();
  std::vector<double> values(budget + 1);
  std::vector<std::uint64_t> seeds(budget + 1, kIdentitySeed);
  for (std::size_t i = 1; i <= budget; ++i) seeds[i] = derive_seed(seed, i);
  parallel_for(budget + 1, threads, [&](std::size_t i) {
    values[i] = maximal_power_integral(random_rearrangement(profile, tree, seeds[i]), p);
  });
  out.identity_value = values[0];
  std::size_t best = 0;
  for (std::size_t i = 1; i <= budget; ++i) {
    if (values[i] > values[best]) best = i;
  }
  out.best_sample = best;
  out.best_seed = seeds[best];
  out.best_value = values[best];

  const StepFunction start = random_rearrangement(profile, tree, seeds[best]);
  std::vector<double> leaves(start.values().begin(), start.values().end());
  if (n > 1) {
    Rng rng(derive_seed(seed, budget + 1));
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    const std::size_t attempts = 4 * budget;
    for (std::size_t k = 0; k < attempts; ++k) {
      const std::size_t i = pick(rng);
      const std::size_t j = pick(rng);
      ++out.swaps_attempted;
      if (leaves[i] == leaves[j]) continue;
      std::swap(leaves[i], leaves[j]);
      const double v = maximal_power_integral(StepFunction(tree, leaves), p);
      if (v > out.best_value) {
        out.best_value = v;
        out.best_sample = budget + 1;
        ++out.swaps_accepted;
      } else {
        std::swap(leaves[i], leaves[j]);
      }
    }
  }
  out.best_leaf_values = std::move(leaves);
  return out;
}

}  // namespace maxtree
