#pragma once

// Data-parallel inner loops shared by every tree sweep.
//
// Each kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant selected at runtime. The variants perform the same IEEE operations
// in the same order per element, so their outputs are bitwise identical; the
// equivalence tests rely on that.
//
// Set MAXTREE_ISA=scalar to force the reference path.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace maxtree::kernels {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);

/// Raw kernel entry points. All pointers are non-overlapping unless noted.
struct Table {
  // out[i] = (c[i*k] + c[i*k+1] + ... + c[i*k+k-1]) / k, summed left to right.
  void (*child_mean)(const double* children, std::size_t parents,
                     std::size_t arity, double* out);

  // One level of the root-to-leaf prefix max. For child i of this level,
  // with parent j = i / arity:
  //   out_max[i] = avg[i] > parent_max[j] ? avg[i] : parent_max[j]
  //   out_arg[i] = avg[i] > parent_max[j] ? first_id + i : parent_arg[j]
  // Ties keep the ancestor.
  void (*descend_max)(const double* parent_max, const std::uint32_t* parent_arg,
                      const double* avg, std::size_t count, std::size_t arity,
                      std::uint32_t first_id, double* out_max,
                      std::uint32_t* out_arg);

  // out[i] = x[i]^r. Integer and half-integer exponents up to 16 use
  // multiplication (and one sqrt); other exponents call std::pow.
  void (*power)(const double* x, std::size_t n, double r, double* out);

  // out[i] = a[i] * b[i]. out may alias a or b.
  void (*multiply)(const double* a, const double* b, std::size_t n, double* out);

  // out[i] = key[i] > threshold ? v[i] : 0.0
  void (*mask_greater)(const double* key, const double* v, std::size_t n,
                       double threshold, double* out);

  // #{i : key[i] > threshold}
  std::size_t (*count_greater)(const double* key, std::size_t n, double threshold);
};

bool available(Isa isa);

/// Kernel table for an ISA. Throws DomainError if the ISA is not available on
/// this machine.
const Table& table(Isa isa);

/// Best available ISA, honoring the MAXTREE_ISA override. Resolved once.
Isa active_isa();

/// Table for active_isa().
const Table& active();

// Span conveniences over active().

void child_mean(std::span<const double> children, std::size_t arity,
                std::span<double> parents);
void power(std::span<const double> x, double r, std::span<double> out);
void multiply(std::span<const double> a, std::span<const double> b,
              std::span<double> out);
void mask_greater(std::span<const double> key, std::span<const double> v,
                  double threshold, std::span<double> out);
std::size_t count_greater(std::span<const double> key, double threshold);

}  // namespace maxtree::kernels
