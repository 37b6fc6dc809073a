#pragma once

// Independent reference computations for the tests. Nothing here calls the
// kernels or the hierarchical reductions it is compared against.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "maxtree/tree_space.hpp"

namespace testing {

using maxtree::NodeId;
using maxtree::StepFunction;
using maxtree::Tree;

inline double plain_mean(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
  long double s = 0;
  for (std::size_t i = lo; i < hi; ++i) s += v[i];
  return static_cast<double>(s / static_cast<long double>(hi - lo));
}

inline std::vector<double> to_vector(const StepFunction& phi) {
  return {phi.values().begin(), phi.values().end()};
}

/// Leaf-range of node j at level m, from index arithmetic alone.
inline std::pair<std::size_t, std::size_t> node_leaves(std::size_t arity, int depth, int m,
                                                       std::size_t j) {
  std::size_t width = 1;
  for (int i = m; i < depth; ++i) width *= arity;
  return {j * width, (j + 1) * width};
}

inline std::size_t ipow(std::size_t b, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

inline std::size_t level_offset(std::size_t arity, int m) {
  std::size_t off = 0;
  for (int i = 0; i < m; ++i) off += ipow(arity, i);
  return off;
}

struct NaiveMaximal {
  std::vector<double> m;
  std::vector<std::uint32_t> arg;  // node id of the highest ancestor attaining the max
};

/// Per leaf: scan ancestors from the root down, averaging by direct summation.
inline NaiveMaximal naive_maximal(const StepFunction& phi) {
  const Tree& t = phi.tree();
  const std::size_t k = t.arity();
  const int d = t.depth();
  const auto v = to_vector(phi);
  NaiveMaximal out;
  out.m.assign(v.size(), -1.0);
  out.arg.assign(v.size(), 0);
  for (std::size_t leaf = 0; leaf < v.size(); ++leaf) {
    for (int lvl = 0; lvl <= d; ++lvl) {
      const std::size_t j = leaf / ipow(k, d - lvl);
      const auto [lo, hi] = node_leaves(k, d, lvl, j);
      const double av = plain_mean(v, lo, hi);
      if (av > out.m[leaf]) {
        out.m[leaf] = av;
        out.arg[leaf] = static_cast<std::uint32_t>(level_offset(k, lvl) + j);
      }
    }
  }
  return out;
}

inline double weighted_power_sum(const std::vector<double>& v, double r) {
  long double s = 0;
  for (const double x : v) s += std::pow(static_cast<long double>(x), r);
  return static_cast<double>(s / v.size());
}

/// Small nonnegative integers, so every node average on a binary tree is an
/// exactly representable dyadic rational.
inline std::vector<double> integer_values(std::size_t n, std::mt19937_64& rng, int top = 9) {
  std::uniform_int_distribution<int> d(0, top);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  if (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; })) v[0] = 1.0;
  return v;
}

inline std::vector<double> real_values(std::size_t n, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  std::bernoulli_distribution zero(0.2);
  std::vector<double> v(n);
  for (auto& x : v) x = zero(rng) ? 0.0 : e(rng);
  v[0] += 0.5;
  return v;
}

inline bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace testing
