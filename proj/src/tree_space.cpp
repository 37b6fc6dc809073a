#include "maxtree/tree_space.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "maxtree/error.hpp"
#include "maxtree/format.hpp"
#include "maxtree/kernels.hpp"

namespace maxtree {

Tree::Tree(std::size_t arity, int depth) : arity_(arity), depth_(depth) {
  offsets_.reserve(static_cast<std::size_t>(depth) + 2);
  measures_.reserve(static_cast<std::size_t>(depth) + 1);
  std::size_t width = 1;
  std::size_t offset = 0;
  for (int m = 0; m <= depth; ++m) {
    offsets_.push_back(offset);
    measures_.push_back(1.0 / static_cast<double>(width));
    offset += width;
    width *= arity;
  }
  offsets_.push_back(offset);
}

Tree build_uniform_tree(std::size_t arity, int depth, std::size_t leaf_budget) {
  if (arity < 2) {
    throw DomainError("tree arity must be at least 2, got " + std::to_string(arity));
  }
  if (depth < 0) {
    throw DomainError("tree depth must be nonnegative, got " + std::to_string(depth));
  }
  std::size_t leaves = 1;
  for (int m = 0; m < depth; ++m) {
    if (leaves > leaf_budget / arity) {
      throw SizeError("tree with arity " + std::to_string(arity) + " and depth " +
                      std::to_string(depth) + " exceeds the leaf budget of " +
                      std::to_string(leaf_budget));
    }
    leaves *= arity;
  }
  if (leaves > leaf_budget) {
    throw SizeError("tree exceeds the leaf budget of " + std::to_string(leaf_budget));
  }
  return Tree(arity, depth);
}

int Tree::level_of(NodeId id) const {
  const auto it = std::upper_bound(offsets_.begin(), offsets_.end(),
                                   static_cast<std::size_t>(id.value));
  return static_cast<int>(it - offsets_.begin()) - 1;
}

std::optional<NodeId> Tree::parent(NodeId id) const {
  const int level = level_of(id);
  if (level == 0) return std::nullopt;
  const std::size_t i = id.value - offsets_[level];
  return NodeId{static_cast<std::uint32_t>(offsets_[level - 1] + i / arity_)};
}

Node Tree::node(NodeId id) const {
  Node n;
  n.id = id;
  n.level = level_of(id);
  n.index_in_level = id.value - offsets_[n.level];
  n.measure = measures_[n.level];
  n.parent = parent(id);
  if (n.level < depth_) {
    const std::size_t first = offsets_[n.level + 1] + n.index_in_level * arity_;
    for (std::size_t j = 0; j < arity_; ++j) {
      n.children.push_back(NodeId{static_cast<std::uint32_t>(first + j)});
    }
  }
  return n;
}

std::pair<std::size_t, std::size_t> Tree::leaf_range(NodeId id) const {
  const int level = level_of(id);
  std::size_t span = 1;
  for (int m = level; m < depth_; ++m) span *= arity_;
  const std::size_t first = (id.value - offsets_[level]) * span;
  return {first, first + span};
}

NodeId Tree::ancestor_at(std::size_t leaf_index, int level) const {
  std::size_t i = leaf_index;
  for (int m = depth_; m > level; --m) i /= arity_;
  return NodeId{static_cast<std::uint32_t>(offsets_[level] + i)};
}

bool Tree::contains(NodeId outer, NodeId inner) const {
  const auto [a0, a1] = leaf_range(outer);
  const auto [b0, b1] = leaf_range(inner);
  return a0 <= b0 && b1 <= a1;
}

double Tree::integrate(std::span<const double> leaf_values,
                       std::span<double> scratch) const {
  if (depth_ == 0) return leaf_values[0];
  std::span<const double> src = leaf_values;
  std::size_t used = 0;
  for (int m = depth_ - 1; m >= 0; --m) {
    const std::span<double> dst = scratch.subspan(used, level_size(m));
    kernels::child_mean(src, arity_, dst);
    used += dst.size();
    src = dst;
  }
  return src[0];
}

double Tree::integrate(std::span<const double> leaf_values) const {
  std::vector<double> scratch(node_count() - leaf_count());
  return integrate(leaf_values, scratch);
}

std::vector<double> Tree::node_averages(std::span<const double> leaf_values) const {
  std::vector<double> avg(node_count());
  std::copy(leaf_values.begin(), leaf_values.end(),
            avg.begin() + static_cast<std::ptrdiff_t>(offsets_[depth_]));
  for (int m = depth_ - 1; m >= 0; --m) {
    kernels::child_mean(
        std::span<const double>(avg).subspan(offsets_[m + 1], level_size(m + 1)),
        arity_, std::span<double>(avg).subspan(offsets_[m], level_size(m)));
  }
  return avg;
}

StepFunction::StepFunction(Tree tree, std::vector<double> leaf_values)
    : tree_(std::move(tree)), values_(std::move(leaf_values)) {
  if (values_.size() != tree_.leaf_count()) {
    throw ShapeError("step function has " + std::to_string(values_.size()) +
                     " leaf values but the tree has " +
                     std::to_string(tree_.leaf_count()) + " leaves");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] >= 0.0) || !std::isfinite(values_[i])) {
      throw DomainError("leaf value " + std::to_string(i) +
                        " must be a finite nonnegative number, got " +
                        format_double(values_[i]));
    }
  }
}

double moment(const StepFunction& phi, double r) {
  if (!(r > 0.0)) throw DomainError("moment order must be positive, got " + format_double(r));
  std::vector<double> powered(phi.size());
  kernels::power(phi.values(), r, powered);
  return phi.tree().integrate(powered);
}

double level_set_measure(const StepFunction& phi, double lambda) {
  return static_cast<double>(kernels::count_greater(phi.values(), lambda)) /
         static_cast<double>(phi.size());
}

StepFunction read_step_function(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  const auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!trim(line).empty()) return true;
    }
    return false;
  };
  if (!next_line()) throw ParseError("step-function file is empty (missing 'arity,depth' line)");
  if (trim(line) == "arity,depth" && !next_line()) {
    throw ParseError("step-function file has a header but no 'arity,depth' values");
  }
  const std::string_view header = trim(line);
  const auto comma = header.find(',');
  if (comma == std::string_view::npos) {
    throw ParseError("line " + std::to_string(line_no) + ": expected 'arity,depth', got '" +
                     std::string(header) + "'");
  }
  const long long arity = parse_integer(header.substr(0, comma), "arity");
  const long long depth = parse_integer(header.substr(comma + 1), "depth");
  if (arity < 2) throw ParseError("arity must be at least 2, got " + std::to_string(arity));
  if (depth < 0) throw ParseError("depth must be nonnegative, got " + std::to_string(depth));
  Tree tree = build_uniform_tree(static_cast<std::size_t>(arity), static_cast<int>(depth));

  std::vector<double> values;
  values.reserve(tree.leaf_count());
  while (next_line()) {
    const std::string field = "leaf value on line " + std::to_string(line_no);
    const double v = parse_double(line, field);
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ParseError(field + " must be a nonnegative decimal, got '" +
                       std::string(trim(line)) + "'");
    }
    values.push_back(v);
  }
  if (values.size() != tree.leaf_count()) {
    throw ParseError("expected " + std::to_string(tree.leaf_count()) +
                     " leaf values for arity " + std::to_string(arity) + " and depth " +
                     std::to_string(depth) + ", found " + std::to_string(values.size()));
  }
  return StepFunction(std::move(tree), std::move(values));
}

void write_step_function(std::ostream& out, const StepFunction& phi) {
  out << phi.tree().arity() << ',' << phi.tree().depth() << '\n';
  for (const double v : phi.values()) out << format_double(v) << '\n';
}

}  // namespace maxtree
