#include "maxtree/random.hpp"

#include <algorithm>
#include <cmath>

#include "maxtree/error.hpp"

namespace maxtree {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double log_uniform(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  const std::uint64_t s = splitmix64(base ^ splitmix64(index));
  return s == 0 ? 1 : s;
}

StepFunction random_step_function(const Tree& tree, Rng& rng,
                                  const RandomFunctionOptions& options) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double weights[3] = {unit(rng), unit(rng), unit(rng)};
  std::discrete_distribution<int> component(std::begin(weights), std::end(weights));
  std::exponential_distribution<double> expo(1.0);
  const double spike_prob = log_uniform(rng, 0.005, 0.2);
  std::bernoulli_distribution spike(spike_prob);

  const std::size_t n = tree.leaf_count();
  std::vector<double> values(n);
  for (auto& v : values) {
    switch (component(rng)) {
      case 0: v = unit(rng); break;
      case 1: v = expo(rng); break;
      default: v = spike(rng) ? 1.0 / spike_prob : 0.0; break;
    }
  }
  if (std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; })) {
    values[std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)] = 1.0;
  }

  std::optional<double> target = options.target_mean;
  if (!target && std::bernoulli_distribution(0.5)(rng)) target = log_uniform(rng, 0.1, 10.0);
  if (target) {
    if (!(*target > 0.0)) throw DomainError("target mean must be positive");
    const double f = tree.integrate(values);
    const double scale = *target / f;
    for (auto& v : values) v *= scale;
  }
  return StepFunction(tree, std::move(values));
}

StepFunction random_tree_function(Rng& rng, std::span<const std::size_t> arities,
                                  int min_depth, int max_depth,
                                  const RandomFunctionOptions& options) {
  if (arities.empty()) throw DomainError("at least one arity is required");
  if (min_depth < 0 || max_depth < min_depth) throw DomainError("invalid depth range");
  const std::size_t arity =
      arities[std::uniform_int_distribution<std::size_t>(0, arities.size() - 1)(rng)];
  const int depth = std::uniform_int_distribution<int>(min_depth, max_depth)(rng);
  return random_step_function(build_uniform_tree(arity, depth), rng, options);
}

}  // namespace maxtree
