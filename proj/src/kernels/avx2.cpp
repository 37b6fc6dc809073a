#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "internal.hpp"

#define MAXTREE_AVX2 __attribute__((target("avx2")))

namespace maxtree::kernels::detail {
namespace {

MAXTREE_AVX2 void child_mean(const double* children, std::size_t parents,
                             std::size_t arity, double* out) {
  const double k = static_cast<double>(arity);
  const __m256d vk = _mm256_set1_pd(k);
  std::size_t i = 0;
  if (arity == 2) {
    for (; i + 4 <= parents; i += 4) {
      const __m256d a = _mm256_loadu_pd(children + 2 * i);
      const __m256d b = _mm256_loadu_pd(children + 2 * i + 4);
      // hadd gives [c0+c1, c4+c5, c2+c3, c6+c7]; restore parent order.
      const __m256d s = _mm256_permute4x64_pd(_mm256_hadd_pd(a, b), 0xD8);
      _mm256_storeu_pd(out + i, _mm256_div_pd(s, vk));
    }
  } else {
    const auto stride = static_cast<long long>(arity);
    const __m256i lane = _mm256_setr_epi64x(0, stride, 2 * stride, 3 * stride);
    for (; i + 4 <= parents; i += 4) {
      const double* base = children + i * arity;
      __m256d acc = _mm256_i64gather_pd(base, lane, 8);
      for (std::size_t j = 1; j < arity; ++j) {
        acc = _mm256_add_pd(acc, _mm256_i64gather_pd(base + j, lane, 8));
      }
      _mm256_storeu_pd(out + i, _mm256_div_pd(acc, vk));
    }
  }
  for (; i < parents; ++i) {
    const double* c = children + i * arity;
    double acc = c[0];
    for (std::size_t j = 1; j < arity; ++j) acc += c[j];
    out[i] = acc / k;
  }
}

MAXTREE_AVX2 void descend_max(const double* parent_max,
                              const std::uint32_t* parent_arg, const double* avg,
                              std::size_t count, std::size_t arity,
                              std::uint32_t first_id, double* out_max,
                              std::uint32_t* out_arg) {
  const __m256i pack = _mm256_setr_epi32(0, 2, 4, 6, 0, 2, 4, 6);
  const __m128i step = _mm_setr_epi32(0, 1, 2, 3);
  const auto* parg = reinterpret_cast<const int*>(parent_arg);
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    const __m256i idx = _mm256_setr_epi64x(
        static_cast<long long>(i / arity), static_cast<long long>((i + 1) / arity),
        static_cast<long long>((i + 2) / arity),
        static_cast<long long>((i + 3) / arity));
    const __m256d pmax = _mm256_i64gather_pd(parent_max, idx, 8);
    const __m128i pa = _mm256_i64gather_epi32(parg, idx, 4);
    const __m256d a = _mm256_loadu_pd(avg + i);
    const __m256d gt = _mm256_cmp_pd(a, pmax, _CMP_GT_OQ);
    _mm256_storeu_pd(out_max + i, _mm256_blendv_pd(pmax, a, gt));
    const __m128i own = _mm_add_epi32(
        _mm_set1_epi32(static_cast<int>(first_id + static_cast<std::uint32_t>(i))),
        step);
    const __m128i gt32 = _mm256_castsi256_si128(
        _mm256_permutevar8x32_epi32(_mm256_castpd_si256(gt), pack));
    _mm_storeu_si128(reinterpret_cast<__m128i*>(out_arg + i),
                     _mm_blendv_epi8(pa, own, gt32));
  }
  for (; i < count; ++i) {
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

MAXTREE_AVX2 void power(const double* x, std::size_t n, double r, double* out) {
  const PowerPlan plan = plan_power(r);
  std::size_t i = 0;
  switch (plan.kind) {
    case PowerPlan::Kind::zero: {
      const __m256d one = _mm256_set1_pd(1.0);
      for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, one);
      break;
    }
    case PowerPlan::Kind::product:
    case PowerPlan::Kind::product_sqrt: {
      const bool with_sqrt = plan.kind == PowerPlan::Kind::product_sqrt;
      for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(x + i);
        __m256d y = v;
        for (int k = 1; k < plan.whole; ++k) y = _mm256_mul_pd(y, v);
        if (with_sqrt) {
          const __m256d s = _mm256_sqrt_pd(v);
          y = plan.whole == 0 ? s : _mm256_mul_pd(s, y);
        }
        _mm256_storeu_pd(out + i, y);
      }
      break;
    }
    case PowerPlan::Kind::general:
      break;
  }
  for (; i < n; ++i) out[i] = apply_plan(plan, x[i], r);
}

MAXTREE_AVX2 void multiply(const double* a, const double* b, std::size_t n,
                           double* out) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i,
                     _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

MAXTREE_AVX2 void mask_greater(const double* key, const double* v, std::size_t n,
                               double threshold, double* out) {
  const __m256d t = _mm256_set1_pd(threshold);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d gt = _mm256_cmp_pd(_mm256_loadu_pd(key + i), t, _CMP_GT_OQ);
    _mm256_storeu_pd(out + i, _mm256_and_pd(gt, _mm256_loadu_pd(v + i)));
  }
  for (; i < n; ++i) out[i] = key[i] > threshold ? v[i] : 0.0;
}

MAXTREE_AVX2 std::size_t count_greater(const double* key, std::size_t n,
                                       double threshold) {
  const __m256d t = _mm256_set1_pd(threshold);
  std::size_t c = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d gt = _mm256_cmp_pd(_mm256_loadu_pd(key + i), t, _CMP_GT_OQ);
    c += static_cast<std::size_t>(__builtin_popcount(
        static_cast<unsigned>(_mm256_movemask_pd(gt))));
  }
  for (; i < n; ++i) c += key[i] > threshold ? 1 : 0;
  return c;
}

}  // namespace

const Table& avx2_table() {
  static const Table t{child_mean, descend_max,  power,
                       multiply,   mask_greater, count_greater};
  return t;
}

}  // namespace maxtree::kernels::detail

#endif
