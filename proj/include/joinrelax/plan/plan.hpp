#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace joinrelax {

// Node numbering of a plan with m leaves (0-based): leaves 0..m-1, joins m..2m-2, and the
// root is always node 2m-2. Leaf slot i stands for query pattern patterns()[i].
struct Join {
  std::size_t left = 0;
  std::size_t right = 0;

  bool operator==(const Join&) const = default;
};

class Plan {
 public:
  // Validates the tree: every non-root node is a child of exactly one join, no cycles.
  Plan(std::vector<std::size_t> patterns, std::vector<Join> joins);

  // Single-pattern plan (no joins).
  static Plan leaf(std::size_t pattern);
  // Left-linear plan joining patterns in `order`; the first join is (order[0], order[1]).
  // Leaf slots are the sorted pattern indices; join m is the deepest join.
  static Plan left_linear(std::span<const std::size_t> order);

  std::size_t size() const { return patterns_.size(); }          // leaf count m
  std::size_t node_count() const { return 2 * size() - 1; }      // N = 2m-1
  std::size_t root() const { return node_count() - 1; }
  bool is_leaf(std::size_t node) const { return node < size(); }

  const std::vector<std::size_t>& patterns() const { return patterns_; }
  const std::vector<Join>& joins() const { return joins_; }
  const Join& join(std::size_t node) const { return joins_.at(node - size()); }

  // Parent of every node; the root maps to itself.
  std::vector<std::size_t> parents() const;
  // Query pattern indices of the leaves under `node`, ascending.
  std::vector<std::size_t> pattern_set(std::size_t node) const;
  // Bitmask over query pattern indices under `node` (pattern indices must be < 64).
  std::uint64_t pattern_mask(std::size_t node) const;

  // For left-linear plans: the patterns in join order, first-join operands first.
  std::vector<std::size_t> leaf_order() const;

  // Same tree with joins renumbered in post-order (deepest first) and operands ordered
  // join-child first, then by smallest pattern index. Two plans describe the same join
  // tree up to operand order iff their canonical forms are equal.
  Plan canonical() const;

  bool operator==(const Plan&) const = default;

 private:
  Plan() = default;

  std::vector<std::size_t> patterns_;
  std::vector<Join> joins_;
};

// Every join has at most one join child, and the first join (node m) has two leaf children.
bool is_left_linear(const Plan& plan);

std::string to_string(const Plan& plan);

}  // namespace joinrelax
