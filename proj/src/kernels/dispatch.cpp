#include <cassert>
#include <cstdlib>
#include <string>

#include "internal.hpp"
#include "maxtree/error.hpp"

namespace maxtree::kernels {

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

bool available(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return __builtin_cpu_supports("avx2") != 0;
#else
      return false;
#endif
  }
  return false;
}

const Table& table(Isa isa) {
  if (!available(isa)) {
    throw DomainError("kernel ISA '" + std::string(to_string(isa)) +
                      "' is not available on this CPU");
  }
#if defined(__x86_64__) || defined(_M_X64)
  if (isa == Isa::avx2) return detail::avx2_table();
#endif
  return detail::scalar_table();
}

namespace {

Isa detect() {
  if (const char* forced = std::getenv("MAXTREE_ISA")) {
    const std::string_view want(forced);
    if (want == "scalar") return Isa::scalar;
    if (want == "avx2" && available(Isa::avx2)) return Isa::avx2;
  }
  return available(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

}  // namespace

Isa active_isa() {
  static const Isa isa = detect();
  return isa;
}

const Table& active() {
  static const Table& t = table(active_isa());
  return t;
}

void child_mean(std::span<const double> children, std::size_t arity,
                std::span<double> parents) {
  assert(children.size() == parents.size() * arity);
  active().child_mean(children.data(), parents.size(), arity, parents.data());
}

void power(std::span<const double> x, double r, std::span<double> out) {
  assert(x.size() == out.size());
  active().power(x.data(), x.size(), r, out.data());
}

void multiply(std::span<const double> a, std::span<const double> b,
              std::span<double> out) {
  assert(a.size() == b.size() && a.size() == out.size());
  active().multiply(a.data(), b.data(), a.size(), out.data());
}

void mask_greater(std::span<const double> key, std::span<const double> v,
                  double threshold, std::span<double> out) {
  assert(key.size() == v.size() && key.size() == out.size());
  active().mask_greater(key.data(), v.data(), key.size(), threshold, out.data());
}

std::size_t count_greater(std::span<const double> key, double threshold) {
  return active().count_greater(key.data(), key.size(), threshold);
}

}  // namespace maxtree::kernels
