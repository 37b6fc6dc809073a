#pragma once

#include <cmath>
#include <cstddef>

#include "maxtree/kernels.hpp"

namespace maxtree::kernels::detail {

// How power() evaluates x^r. Shared by every ISA so that all variants take
// the same path for a given exponent.
struct PowerPlan {
  enum class Kind { zero, product, product_sqrt, general };
  Kind kind = Kind::general;
  int whole = 0;  // multiplications: x^whole (whole >= 1 for product kinds)
};

inline PowerPlan plan_power(double r) {
  constexpr double kMaxFast = 16.0;
  if (r == 0.0) return {PowerPlan::Kind::zero, 0};
  if (r > 0.0 && r <= kMaxFast) {
    const double twice = 2.0 * r;
    if (twice == std::floor(twice)) {
      const int n = static_cast<int>(twice);
      if (n % 2 == 0) return {PowerPlan::Kind::product, n / 2};
      return {PowerPlan::Kind::product_sqrt, n / 2};
    }
  }
  return {PowerPlan::Kind::general, 0};
}

// x^whole by left-to-right multiplication; whole >= 1.
inline double product_power(double x, int whole) {
  double y = x;
  for (int k = 1; k < whole; ++k) y *= x;
  return y;
}

inline double apply_plan(const PowerPlan& plan, double x, double r) {
  switch (plan.kind) {
    case PowerPlan::Kind::zero:
      return 1.0;
    case PowerPlan::Kind::product:
      return product_power(x, plan.whole);
    case PowerPlan::Kind::product_sqrt: {
      const double s = std::sqrt(x);
      return plan.whole == 0 ? s : s * product_power(x, plan.whole);
    }
    case PowerPlan::Kind::general:
      break;
  }
  return std::pow(x, r);
}

const Table& scalar_table();
#if defined(__x86_64__) || defined(_M_X64)
const Table& avx2_table();
#endif

}  // namespace maxtree::kernels::detail
