#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "maxtree/error.hpp"
#include "maxtree/maximal_op.hpp"
#include "support.hpp"

using namespace maxtree;

namespace {

StepFunction golden() { return StepFunction(build_uniform_tree(2, 2), {4, 2, 1, 1}); }

StepFunction random_phi(std::mt19937_64& rng, int trial) {
  const Tree t = build_uniform_tree(2 + trial % 3, 1 + trial % 6);
  return StepFunction(t, testing::real_values(t.leaf_count(), rng));
}

}  // namespace

TEST_CASE("node averages") {
  CHECK(averages(golden()) == std::vector<double>{2, 3, 1, 4, 2, 1, 1});
  const StepFunction c(build_uniform_tree(3, 2), std::vector<double>(9, 0.7));
  for (const double a : averages(c)) CHECK(a == doctest::Approx(0.7).epsilon(1e-15));
  const StepFunction spike(build_uniform_tree(2, 2), {1, 0, 0, 0});
  CHECK(averages(spike) == std::vector<double>{0.25, 0.5, 0, 1, 0, 0, 0});
}

TEST_CASE("root average is bitwise the first moment") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 60; ++trial) {
    const StepFunction phi = random_phi(rng, trial);
    CHECK(averages(phi)[0] == moment(phi, 1.0));
  }
}

TEST_CASE("maximal function on hand-computed cases") {
  const MaximalResult r = maximal_function(golden());
  CHECK(testing::to_vector(r.m_phi) == std::vector<double>{4, 3, 2, 2});
  CHECK(r.attaining_node == std::vector<NodeId>{{3}, {1}, {0}, {0}});

  const StepFunction c(build_uniform_tree(2, 3), std::vector<double>(8, 1.25));
  const MaximalResult rc = maximal_function(c);
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(rc.m_phi.value(i) == 1.25);
    CHECK(rc.attaining_node[i] == NodeId{0});
  }

  const StepFunction spike(build_uniform_tree(2, 2), {1, 0, 0, 0});
  CHECK(maximal_values(spike) == std::vector<double>{1, 0.5, 0.25, 0.25});
}

TEST_CASE("maximal function matches an ancestor scan exactly on dyadic data") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const Tree t = build_uniform_tree(2, 1 + trial % 8);
    const StepFunction phi(t, testing::integer_values(t.leaf_count(), rng));
    const auto naive = testing::naive_maximal(phi);
    const MaximalResult r = maximal_function(phi);
    CHECK(testing::to_vector(r.m_phi) == naive.m);
    for (std::size_t i = 0; i < phi.size(); ++i) CHECK(r.attaining_node[i].value == naive.arg[i]);
  }
}

TEST_CASE("maximal function matches an ancestor scan on general data") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    const StepFunction phi = random_phi(rng, trial);
    const auto naive = testing::naive_maximal(phi);
    const auto m = maximal_values(phi);
    for (std::size_t i = 0; i < phi.size(); ++i) CHECK(testing::rel_close(m[i], naive.m[i], 1e-13));
  }
}

TEST_CASE("pointwise lower bounds of M phi") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const StepFunction phi = random_phi(rng, trial);
    const auto m = maximal_values(phi);
    const double f = moment(phi, 1.0);
    for (std::size_t i = 0; i < phi.size(); ++i) {
      CHECK(m[i] >= phi.value(i));
      CHECK(m[i] >= f);
    }
  }
}

TEST_CASE("linearization of the golden function") {
  const Linearization lin = linearize(golden());
  CHECK(lin.s_phi == std::vector<NodeId>{{0}, {1}, {3}});
  CHECK(lin.a_mass == std::vector<double>{0.5, 0.25, 0.25});
  CHECK(lin.y_avg == std::vector<double>{2, 3, 4});
  REQUIRE(lin.star.size() == 3);
  CHECK_FALSE(lin.star[0].has_value());
  CHECK(lin.star[1] == NodeId{0});
  CHECK(lin.star[2] == NodeId{1});
  CHECK(lin.find(NodeId{3}) == 2u);
  CHECK_FALSE(lin.find(NodeId{2}).has_value());

  std::ostringstream out;
  write_linearization_json(out, lin);
  CHECK(out.str() == R"({"s_phi":[0,1,3],"a":[0.5,0.25,0.25],"y":[2.0,3.0,4.0],"star":{"1":0,"3":1}})");
}

TEST_CASE("linearization of a constant is the root alone") {
  const Linearization lin = linearize(StepFunction(build_uniform_tree(3, 2), std::vector<double>(9, 2.5)));
  CHECK(lin.s_phi == std::vector<NodeId>{{0}});
  CHECK(lin.a_mass == std::vector<double>{1.0});
  CHECK(lin.y_avg == std::vector<double>{2.5});
  CHECK_FALSE(lin.star[0].has_value());
}

TEST_CASE("linearization invariants on random functions") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 150; ++trial) {
    const StepFunction phi = random_phi(rng, trial);
    const Tree& t = phi.tree();
    const MaximalResult r = maximal_function(phi);
    const Linearization lin = linearize(r);
    REQUIRE(lin.size() >= 1);
    CHECK(lin.s_phi[0] == t.root());

    double total = 0.0;
    for (const double a : lin.a_mass) total += a;
    CHECK(std::abs(total - 1.0) <= 1e-12);

    for (std::size_t i = 0; i < lin.size(); ++i) {
      const NodeId I = lin.s_phi[i];
      CHECK(lin.a_mass[i] > 0.0);
      // a_I = mu(I) - sum of mu(J) over J with J* = I.
      double children = 0.0;
      for (std::size_t j = 0; j < lin.size(); ++j) {
        if (lin.star[j] == I) children += t.measure(lin.s_phi[j]);
      }
      CHECK(std::abs(lin.a_mass[i] - (t.measure(I) - children)) <= 1e-12);
      // I* is the smallest strict superset in S_phi.
      if (i > 0) {
        std::optional<NodeId> best;
        for (std::size_t j = 0; j < lin.size(); ++j) {
          const NodeId J = lin.s_phi[j];
          if (J != I && t.contains(J, I) && (!best || t.contains(*best, J))) best = J;
        }
        CHECK(lin.star[i] == best);
      }
    }
    // Leaves of A(phi, J) lie either outside I or inside J subset of I.
    for (std::size_t leaf = 0; leaf < phi.size(); ++leaf) {
      const NodeId J = r.attaining_node[leaf];
      for (const NodeId I : lin.s_phi) {
        if (t.contains(I, t.leaf(leaf))) CHECK(t.contains(I, J));
      }
    }
    // M phi is the sum of y_I over the cells A(phi, I).
    for (std::size_t leaf = 0; leaf < phi.size(); ++leaf) {
      const auto pos = lin.find(r.attaining_node[leaf]);
      REQUIRE(pos.has_value());
      CHECK(r.m_phi.value(leaf) == lin.y_avg[*pos]);
    }
    for (const double p : {1.5, 2.0, 4.0}) {
      double s = 0.0;
      for (std::size_t i = 0; i < lin.size(); ++i) s += lin.a_mass[i] * std::pow(lin.y_avg[i], p);
      CHECK(testing::rel_close(s, moment(r.m_phi, p), 1e-12));
    }
  }
}

TEST_CASE("L^p bound for M phi") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const StepFunction phi = random_phi(rng, trial);
    const StepFunction m(phi.tree(), maximal_values(phi));
    for (const double p : {1.2, 1.5, 2.0, 3.0, 6.0}) {
      CHECK(moment(m, p) <= std::pow(p / (p - 1.0), p) * moment(phi, p));
    }
  }
}

TEST_CASE("weak-type deficit") {
  CHECK(weak_type_deficit(golden(), 2.5) == doctest::Approx(0.1).epsilon(1e-14));
  const StepFunction c(build_uniform_tree(2, 2), std::vector<double>(4, 1.5));
  CHECK(weak_type_deficit(c, 1.5) == 0.0);
  CHECK(weak_type_deficit(c, 7.0) == 0.0);
  const StepFunction spike(build_uniform_tree(2, 2), {1, 0, 0, 0});
  CHECK(weak_type_deficit(spike, 0.3) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK_THROWS_AS(weak_type_deficit(spike, 0.0), DomainError);

  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.01, 4.0);
  for (int trial = 0; trial < 200; ++trial) {
    const StepFunction phi = random_phi(rng, trial);
    CHECK(weak_type_deficit(phi, u(rng)) >= -1e-12);
  }
}

TEST_CASE("level approximations increase to M phi") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 40; ++trial) {
    const StepFunction phi = random_phi(rng, trial);
    const int d = phi.tree().depth();
    const auto m = maximal_values(phi);
    std::vector<double> prev(phi.size(), 0.0);
    for (int level = 0; level <= d; ++level) {
      const StepFunction phi_m = level_approximation(phi, level);
      const auto cur = maximal_values(phi_m);
      for (std::size_t i = 0; i < phi.size(); ++i) {
        CHECK(cur[i] >= prev[i] * (1 - 1e-12));
        CHECK(cur[i] <= m[i] * (1 + 1e-12));
      }
      CHECK(moment(phi_m, 2.5) <= moment(phi, 2.5) * (1 + 1e-12));
      prev = cur;
    }
    CHECK(level_approximation(phi, d) == phi);
  }
  CHECK_THROWS_AS(level_approximation(golden(), 3), DomainError);
}
