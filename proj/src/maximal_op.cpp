#include "maxtree/maximal_op.hpp"

#include <algorithm>
#include <ostream>
#include <string>

#include "json.hpp"
#include "maxtree/error.hpp"
#include "maxtree/format.hpp"
#include "maxtree/kernels.hpp"

namespace maxtree {
namespace {

struct Sweep {
  std::vector<double> max;
  std::vector<std::uint32_t> arg;
};

// Root-to-leaf prefix max over precomputed node averages.
Sweep descend(const Tree& tree, const std::vector<double>& avg) {
  const auto& k = kernels::active();
  Sweep cur{{avg[0]}, {0u}};
  Sweep next;
  for (int m = 1; m <= tree.depth(); ++m) {
    const std::size_t n = tree.level_size(m);
    const std::size_t off = tree.level_offset(m);
    next.max.resize(n);
    next.arg.resize(n);
    k.descend_max(cur.max.data(), cur.arg.data(), avg.data() + off, n, tree.arity(),
                  static_cast<std::uint32_t>(off), next.max.data(), next.arg.data());
    std::swap(cur, next);
  }
  return cur;
}

}  // namespace

std::vector<double> averages(const StepFunction& phi) {
  return phi.tree().node_averages(phi.values());
}

MaximalResult maximal_function(const StepFunction& phi) {
  const Tree& tree = phi.tree();
  Sweep s = descend(tree, averages(phi));
  std::vector<NodeId> attaining(s.arg.size());
  std::transform(s.arg.begin(), s.arg.end(), attaining.begin(),
                 [](std::uint32_t v) { return NodeId{v}; });
  return MaximalResult{phi, StepFunction(tree, std::move(s.max)), std::move(attaining)};
}

std::vector<double> maximal_values(const StepFunction& phi) {
  return descend(phi.tree(), averages(phi)).max;
}

std::optional<std::size_t> Linearization::find(NodeId id) const {
  const auto it = std::lower_bound(s_phi.begin(), s_phi.end(), id);
  if (it == s_phi.end() || *it != id) return std::nullopt;
  return static_cast<std::size_t>(it - s_phi.begin());
}

Linearization linearize(const StepFunction& phi) {
  return linearize(maximal_function(phi));
}

Linearization linearize(const MaximalResult& result) {
  const Tree& tree = result.phi.tree();
  const std::vector<double> avg = averages(result.phi);
  std::vector<std::size_t> counts(tree.node_count(), 0);
  for (const NodeId id : result.attaining_node) ++counts[id.value];

  Linearization lin;
  std::vector<char> member(tree.node_count(), 0);
  const double n = static_cast<double>(tree.leaf_count());
  for (std::size_t id = 0; id < counts.size(); ++id) {
    if (id != 0 && counts[id] == 0) continue;
    member[id] = 1;
    lin.s_phi.push_back(NodeId{static_cast<std::uint32_t>(id)});
    lin.a_mass.push_back(static_cast<double>(counts[id]) / n);
    lin.y_avg.push_back(avg[id]);
    lin.leaf_count.push_back(counts[id]);
  }
  lin.star.reserve(lin.s_phi.size());
  for (const NodeId id : lin.s_phi) {
    std::optional<NodeId> up = tree.parent(id);
    while (up && !member[up->value]) up = tree.parent(*up);
    lin.star.push_back(up);
  }
  return lin;
}

nlohmann::ordered_json to_json(const Linearization& lin) {
  nlohmann::ordered_json j;
  auto& ids = j["s_phi"] = nlohmann::ordered_json::array();
  for (const NodeId id : lin.s_phi) ids.push_back(id.value);
  j["a"] = lin.a_mass;
  j["y"] = lin.y_avg;
  auto& star = j["star"] = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < lin.size(); ++i) {
    if (lin.star[i]) star[std::to_string(lin.s_phi[i].value)] = lin.star[i]->value;
  }
  return j;
}

void write_linearization_json(std::ostream& out, const Linearization& lin) {
  out << to_json(lin).dump();
}

WeakTypeTerms weak_type_terms(const StepFunction& phi, std::span<const double> m_phi,
                              double lambda) {
  if (!(lambda > 0.0)) {
    throw DomainError("weak-type level lambda must be positive, got " + format_double(lambda));
  }
  WeakTypeTerms t;
  t.lambda = lambda;
  t.set_measure = static_cast<double>(kernels::count_greater(m_phi, lambda)) /
                  static_cast<double>(phi.size());
  std::vector<double> masked(phi.size());
  kernels::mask_greater(m_phi, phi.values(), lambda, masked);
  t.restricted_integral = phi.tree().integrate(masked);
  return t;
}

double weak_type_deficit(const StepFunction& phi, double lambda) {
  const std::vector<double> m = maximal_values(phi);
  return weak_type_terms(phi, m, lambda).deficit();
}

StepFunction level_approximation(const StepFunction& phi, int level) {
  const Tree& tree = phi.tree();
  if (level < 0 || level > tree.depth()) {
    throw DomainError("approximation level must lie in [0, " +
                      std::to_string(tree.depth()) + "], got " + std::to_string(level));
  }
  const std::vector<double> avg = averages(phi);
  std::vector<double> values(tree.leaf_count());
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = avg[tree.ancestor_at(i, level).value];
  }
  return StepFunction(tree, std::move(values));
}

}  // namespace maxtree
