#pragma once

// The tree maximal operator on step functions and its linearization.

#include <iosfwd>
#include <optional>
#include <vector>

#include <json.hpp>

#include "maxtree/tree_space.hpp"

namespace maxtree {

/// Av_I(phi) for every node, indexed by NodeId::value. The root entry is
/// bitwise equal to moment(phi, 1).
std::vector<double> averages(const StepFunction& phi);

struct MaximalResult {
  StepFunction phi;
  StepFunction m_phi;                 // per-leaf value of M phi
  std::vector<NodeId> attaining_node;  // I_phi(x): largest node attaining the max
};

/// Per leaf, the max of Av_I over the ancestor chain (leaf included), with the
/// highest ancestor attaining it. One root-to-leaf sweep.
MaximalResult maximal_function(const StepFunction& phi);

/// M phi alone (leaf values).
std::vector<double> maximal_values(const StepFunction& phi);

/// The decomposition M phi = sum over S_phi of y_I * chi_{A(phi, I)}.
/// Entries are parallel arrays sorted by node id; index 0 is the root.
struct Linearization {
  std::vector<NodeId> s_phi;
  std::vector<double> a_mass;            // a_I = mu(A(phi, I))
  std::vector<double> y_avg;             // y_I = Av_I(phi)
  std::vector<std::optional<NodeId>> star;  // I*, empty for the root
  std::vector<std::size_t> leaf_count;   // number of leaves in A(phi, I)

  std::size_t size() const { return s_phi.size(); }
  /// Position of a node in s_phi, if present.
  std::optional<std::size_t> find(NodeId id) const;
};

Linearization linearize(const StepFunction& phi);
Linearization linearize(const MaximalResult& result);

/// JSON object {"s_phi":[...], "a":[...], "y":[...], "star":{"<id>":<id>,...}}
/// with node ids as integers and shortest round-trip reals.
nlohmann::ordered_json to_json(const Linearization& lin);
void write_linearization_json(std::ostream& out, const Linearization& lin);

/// (1/lambda) * int_{M phi > lambda} phi - mu({M phi > lambda}).
/// Nonnegative by the weak type (1,1) inequality. Throws DomainError unless
/// lambda > 0.
double weak_type_deficit(const StepFunction& phi, double lambda);

struct WeakTypeTerms {
  double set_measure = 0.0;   // mu({M phi > lambda})
  double restricted_integral = 0.0;  // int over that set of phi
  double lambda = 0.0;
  double deficit() const { return restricted_integral / lambda - set_measure; }
};
WeakTypeTerms weak_type_terms(const StepFunction& phi, std::span<const double> m_phi,
                              double lambda);

/// phi_m: phi averaged over the nodes of level m, expressed on the leaves.
StepFunction level_approximation(const StepFunction& phi, int level);

}  // namespace maxtree
