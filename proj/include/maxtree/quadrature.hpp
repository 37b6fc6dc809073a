#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace maxtree::quadrature {

inline constexpr std::size_t kGaussNodes = 32;

struct GaussRule {
  std::array<double, kGaussNodes> nodes;    // on [-1, 1]
  std::array<double, kGaussNodes> weights;
};

/// 32-point Gauss-Legendre rule, computed once by Newton iteration on P_32.
const GaussRule& gauss_legendre_32();

template <class F>
double gauss_panel(F&& f, double a, double b) {
  const GaussRule& rule = gauss_legendre_32();
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t i = 0; i < kGaussNodes; ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return half * sum;
}

namespace detail {

template <class F>
double adapt(F& f, double a, double b, double whole, double rel_tol, int depth) {
  const double m = 0.5 * (a + b);
  const double left = gauss_panel(f, a, m);
  const double right = gauss_panel(f, m, b);
  const double refined = left + right;
  if (depth <= 0 || std::abs(refined - whole) <= rel_tol * std::abs(refined) ||
      refined == whole) {
    return refined;
  }
  return adapt(f, a, m, left, rel_tol, depth - 1) +
         adapt(f, m, b, right, rel_tol, depth - 1);
}

}  // namespace detail

/// Adaptive Gauss-Legendre: bisect panels until the two-half estimate agrees
/// with the whole-panel estimate to `rel_tol`.
template <class F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-10, int max_depth = 48) {
  if (a == b) return 0.0;
  return detail::adapt(f, a, b, gauss_panel(f, a, b), rel_tol, max_depth);
}

}  // namespace maxtree::quadrature
