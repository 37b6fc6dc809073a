#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "maxtree/error.hpp"
#include "maxtree/kernels.hpp"

using namespace maxtree::kernels;

namespace {

std::vector<double> randoms(std::size_t n, std::mt19937_64& rng, double scale = 10.0) {
  std::uniform_real_distribution<double> u(0.0, scale);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

std::vector<Isa> vector_isas() {
  std::vector<Isa> out;
  if (available(Isa::avx2)) out.push_back(Isa::avx2);
  return out;
}

const double kExponents[] = {0.25, 0.5, 1.0, 1.25, 1.5, 1.7, 2.0, 2.5, 3.0,
                             4.5,  5.0, 7.0, 15.5, 16.0, 16.5, 17.0, 33.3, 63.5};

}  // namespace

TEST_CASE("scalar table is always available") {
  CHECK(available(Isa::scalar));
  CHECK(to_string(Isa::scalar) == "scalar");
  CHECK_NOTHROW(table(Isa::scalar));
  if (!available(Isa::avx2)) CHECK_THROWS_AS(table(Isa::avx2), maxtree::DomainError);
}

TEST_CASE("MAXTREE_ISA=scalar forces the reference path") {
  const char* env = std::getenv("MAXTREE_ISA");
  if (env && std::string(env) == "scalar") {
    CHECK(active_isa() == Isa::scalar);
  } else if (available(Isa::avx2)) {
    CHECK(active_isa() == Isa::avx2);
  }
}

TEST_CASE("scalar child_mean sums children left to right") {
  const Table& s = table(Isa::scalar);
  const std::vector<double> c = {0.1, 0.2, 0.3, 1.0, 2.0, 4.0};
  std::vector<double> out(2);
  s.child_mean(c.data(), 2, 3, out.data());
  CHECK(out[0] == ((0.1 + 0.2) + 0.3) / 3.0);
  CHECK(out[1] == ((1.0 + 2.0) + 4.0) / 3.0);
}

TEST_CASE("scalar power agrees with std::pow") {
  std::mt19937_64 rng(3);
  const auto x = randoms(257, rng, 3.0);
  std::vector<double> out(x.size());
  for (const double r : kExponents) {
    table(Isa::scalar).power(x.data(), x.size(), r, out.data());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double ref = std::pow(x[i], r);
      CHECK(std::abs(out[i] - ref) <= 1e-14 * ref);
    }
  }
  std::vector<double> zeros(5, 0.0), z(5);
  table(Isa::scalar).power(zeros.data(), 5, 1.5, z.data());
  for (const double v : z) CHECK(v == 0.0);
}

TEST_CASE("scalar descend_max keeps the ancestor on ties") {
  const std::vector<double> pmax = {2.0, 5.0};
  const std::vector<std::uint32_t> parg = {7, 8};
  const std::vector<double> avg = {2.0, 3.0, 5.0, 4.0};
  std::vector<double> omax(4);
  std::vector<std::uint32_t> oarg(4);
  table(Isa::scalar).descend_max(pmax.data(), parg.data(), avg.data(), 4, 2, 100, omax.data(),
                                 oarg.data());
  CHECK(omax == std::vector<double>{2.0, 3.0, 5.0, 5.0});
  CHECK(oarg == std::vector<std::uint32_t>{7, 101, 8, 8});
}

TEST_CASE("vector kernels are bitwise identical to the scalar reference") {
  const Table& ref = table(Isa::scalar);
  std::mt19937_64 rng(11);
  for (const Isa isa : vector_isas()) {
    CAPTURE(to_string(isa));
    const Table& vec = table(isa);

    SUBCASE("child_mean") {
      for (std::size_t arity = 2; arity <= 5; ++arity) {
        for (std::size_t parents : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 31u, 64u, 1000u}) {
          const auto c = randoms(parents * arity, rng);
          std::vector<double> a(parents), b(parents);
          ref.child_mean(c.data(), parents, arity, a.data());
          vec.child_mean(c.data(), parents, arity, b.data());
          CHECK(same_bits(a, b));
        }
      }
    }

    SUBCASE("descend_max") {
      for (std::size_t arity = 2; arity <= 4; ++arity) {
        for (std::size_t parents : {1u, 2u, 3u, 5u, 8u, 13u, 100u}) {
          const std::size_t n = parents * arity;
          auto pmax = randoms(parents, rng);
          std::vector<std::uint32_t> parg(parents);
          for (std::size_t j = 0; j < parents; ++j) parg[j] = static_cast<std::uint32_t>(j * 3 + 1);
          auto avg = randoms(n, rng);
          // Force ties with the parent on every third child.
          for (std::size_t i = 0; i < n; i += 3) avg[i] = pmax[i / arity];
          std::vector<double> m1(n), m2(n);
          std::vector<std::uint32_t> a1(n), a2(n);
          ref.descend_max(pmax.data(), parg.data(), avg.data(), n, arity, 1000, m1.data(), a1.data());
          vec.descend_max(pmax.data(), parg.data(), avg.data(), n, arity, 1000, m2.data(), a2.data());
          CHECK(same_bits(m1, m2));
          CHECK(a1 == a2);
        }
      }
    }

    SUBCASE("power") {
      for (const double r : kExponents) {
        CAPTURE(r);
        for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u, 1001u}) {
          auto x = randoms(n, rng, 4.0);
          if (n > 2) x[1] = 0.0;
          std::vector<double> a(n), b(n);
          ref.power(x.data(), n, r, a.data());
          vec.power(x.data(), n, r, b.data());
          CHECK(same_bits(a, b));
        }
      }
    }

    SUBCASE("multiply, including in place") {
      for (std::size_t n : {0u, 1u, 4u, 6u, 333u}) {
        const auto x = randoms(n, rng);
        const auto y = randoms(n, rng);
        std::vector<double> a(n), b(n);
        ref.multiply(x.data(), y.data(), n, a.data());
        vec.multiply(x.data(), y.data(), n, b.data());
        CHECK(same_bits(a, b));
        std::vector<double> z = x;
        vec.multiply(z.data(), y.data(), n, z.data());
        CHECK(same_bits(a, z));
      }
    }

    SUBCASE("mask_greater and count_greater") {
      for (std::size_t n : {0u, 1u, 3u, 4u, 9u, 500u}) {
        auto key = randoms(n, rng);
        const auto v = randoms(n, rng);
        const double threshold = 5.0;
        if (n > 1) key[0] = threshold;
        std::vector<double> a(n), b(n);
        ref.mask_greater(key.data(), v.data(), n, threshold, a.data());
        vec.mask_greater(key.data(), v.data(), n, threshold, b.data());
        CHECK(same_bits(a, b));
        CHECK(ref.count_greater(key.data(), n, threshold) ==
              vec.count_greater(key.data(), n, threshold));
      }
    }
  }
}

TEST_CASE("span wrappers use the active table") {
  const std::vector<double> x = {1.0, 2.0, 3.0, 4.0};
  std::vector<double> out(2);
  child_mean(x, 2, out);
  CHECK(out == std::vector<double>{1.5, 3.5});
  CHECK(count_greater(x, 2.0) == 2);
  std::vector<double> sq(4);
  power(x, 2.0, sq);
  CHECK(sq == std::vector<double>{1.0, 4.0, 9.0, 16.0});
}
