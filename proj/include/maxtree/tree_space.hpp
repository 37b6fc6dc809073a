#pragma once

// Finite uniform measure trees on a probability space and nonnegative step
// functions constant on their leaves.
//
// Nodes use an implicit level-major layout: level m holds arity^m nodes with
// ids offset(m) .. offset(m) + arity^m - 1, and node i of level m has children
// arity*i .. arity*i + arity - 1 of level m + 1. The leaf level, read left to
// right, is the canonical (depth-first) leaf order used by all file formats.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace maxtree {

struct NodeId {
  std::uint32_t value = 0;

  friend constexpr auto operator<=>(NodeId, NodeId) = default;
};

struct Node {
  NodeId id;
  int level = 0;
  std::size_t index_in_level = 0;
  double measure = 0.0;
  std::optional<NodeId> parent;
  std::vector<NodeId> children;  // empty for leaves, otherwise arity entries

  bool is_leaf() const { return children.empty(); }
};

/// Default guard on arity^depth.
inline constexpr std::size_t kDefaultLeafBudget = std::size_t{1} << 24;

class Tree {
 public:
  std::size_t arity() const { return arity_; }
  int depth() const { return depth_; }

  std::size_t node_count() const { return offsets_.back(); }
  std::size_t leaf_count() const { return level_size(depth_); }
  std::size_t level_size(int level) const {
    return offsets_[level + 1] - offsets_[level];
  }
  std::size_t level_offset(int level) const { return offsets_[level]; }
  double level_measure(int level) const { return measures_[level]; }
  double leaf_measure() const { return measures_[depth_]; }

  NodeId root() const { return NodeId{0}; }
  NodeId leaf(std::size_t index) const {
    return NodeId{static_cast<std::uint32_t>(offsets_[depth_] + index)};
  }

  int level_of(NodeId id) const;
  std::size_t index_in_level(NodeId id) const {
    return id.value - offsets_[level_of(id)];
  }
  double measure(NodeId id) const { return measures_[level_of(id)]; }
  std::optional<NodeId> parent(NodeId id) const;
  Node node(NodeId id) const;

  /// Leaf indices [first, last) covered by a node.
  std::pair<std::size_t, std::size_t> leaf_range(NodeId id) const;

  /// Ancestor of a leaf at the given level (the leaf itself at level depth).
  NodeId ancestor_at(std::size_t leaf_index, int level) const;

  /// Does `outer` contain `inner` (non-strictly)?
  bool contains(NodeId outer, NodeId inner) const;

  /// Integral of a leaf function: sum over leaves of measure * value,
  /// accumulated level by level as means of children. `scratch` must hold at
  /// least leaf_count() / arity() doubles.
  double integrate(std::span<const double> leaf_values,
                   std::span<double> scratch) const;
  double integrate(std::span<const double> leaf_values) const;

  /// Average of the leaf function over every node, indexed by NodeId.
  std::vector<double> node_averages(std::span<const double> leaf_values) const;

  friend bool operator==(const Tree& a, const Tree& b) {
    return a.arity_ == b.arity_ && a.depth_ == b.depth_;
  }

 private:
  friend Tree build_uniform_tree(std::size_t, int, std::size_t);
  Tree(std::size_t arity, int depth);

  std::size_t arity_ = 2;
  int depth_ = 0;
  std::vector<std::size_t> offsets_;  // depth + 2 entries
  std::vector<double> measures_;      // depth + 1 entries
};

/// Uniform tree: every node of level m has measure arity^(-m).
/// Throws DomainError for arity < 2 or depth < 0, SizeError if arity^depth
/// exceeds `leaf_budget`.
Tree build_uniform_tree(std::size_t arity, int depth,
                        std::size_t leaf_budget = kDefaultLeafBudget);

/// Nonnegative function constant on the leaves of a tree.
class StepFunction {
 public:
  /// Throws ShapeError on a length mismatch and DomainError on negative or
  /// non-finite values.
  StepFunction(Tree tree, std::vector<double> leaf_values);

  const Tree& tree() const { return tree_; }
  std::span<const double> values() const { return values_; }
  double value(std::size_t leaf_index) const { return values_[leaf_index]; }
  std::size_t size() const { return values_.size(); }

  /// Integral over X (root average).
  double integral() const { return tree_.integrate(values_); }

  friend bool operator==(const StepFunction&, const StepFunction&) = default;

 private:
  Tree tree_;
  std::vector<double> values_;
};

/// sum over leaves of mu(leaf) * value^r. r = 1 gives f, r = p gives F.
/// Throws DomainError unless r > 0.
double moment(const StepFunction& phi, double r);

/// mu({x : phi(x) > lambda}), computed as count / leaf_count.
double level_set_measure(const StepFunction& phi, double lambda);

/// Step-function CSV: first line "arity,depth" (either the literal header
/// followed by a numeric line, or the numeric line directly), then one leaf
/// value per line in canonical order.
StepFunction read_step_function(std::istream& in);
void write_step_function(std::ostream& out, const StepFunction& phi);

}  // namespace maxtree
