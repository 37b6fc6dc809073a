#include "internal.hpp"

namespace maxtree::kernels::detail {
namespace {

void child_mean(const double* children, std::size_t parents, std::size_t arity,
                double* out) {
  const double k = static_cast<double>(arity);
  for (std::size_t i = 0; i < parents; ++i) {
    const double* c = children + i * arity;
    double acc = c[0];
    for (std::size_t j = 1; j < arity; ++j) acc += c[j];
    out[i] = acc / k;
  }
}

void descend_max(const double* parent_max, const std::uint32_t* parent_arg,
                 const double* avg, std::size_t count, std::size_t arity,
                 std::uint32_t first_id, double* out_max, std::uint32_t* out_arg) {
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i / arity;
    if (avg[i] > parent_max[j]) {
      out_max[i] = avg[i];
      out_arg[i] = first_id + static_cast<std::uint32_t>(i);
    } else {
      out_max[i] = parent_max[j];
      out_arg[i] = parent_arg[j];
    }
  }
}

void power(const double* x, std::size_t n, double r, double* out) {
  const PowerPlan plan = plan_power(r);
  for (std::size_t i = 0; i < n; ++i) out[i] = apply_plan(plan, x[i], r);
}

void multiply(const double* a, const double* b, std::size_t n, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void mask_greater(const double* key, const double* v, std::size_t n,
                  double threshold, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = key[i] > threshold ? v[i] : 0.0;
}

std::size_t count_greater(const double* key, std::size_t n, double threshold) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i) c += key[i] > threshold ? 1 : 0;
  return c;
}

}  // namespace

const Table& scalar_table() {
  static const Table t{child_mean, descend_max,  power,
                       multiply,   mask_greater, count_greater};
  return t;
}

}  // namespace maxtree::kernels::detail
