#include "joinrelax/plan/plan.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "joinrelax/error.hpp"

namespace joinrelax {

Plan::Plan(std::vector<std::size_t> patterns, std::vector<Join> joins)
    : patterns_(std::move(patterns)), joins_(std::move(joins)) {
  const std::size_t m = patterns_.size();
  if (m == 0) throw StructuralError("plan needs at least one leaf");
  if (joins_.size() != m - 1) {
    throw StructuralError("plan with " + std::to_string(m) + " leaves needs " + std::to_string(m - 1) +
                          " joins, got " + std::to_string(joins_.size()));
  }
  auto sorted = patterns_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw StructuralError("plan references a pattern twice");
  }
  const std::size_t n_nodes = 2 * m - 1;
  std::vector<int> uses(n_nodes, 0);
  for (std::size_t k = 0; k < joins_.size(); ++k) {
    const std::size_t self = m + k;
    for (std::size_t child : {joins_[k].left, joins_[k].right}) {
      if (child >= n_nodes) throw StructuralError("join child " + std::to_string(child) + " out of range");
      if (child == self) throw StructuralError("join " + std::to_string(self) + " is its own child");
      ++uses[child];
    }
  }
  for (std::size_t v = 0; v + 1 < n_nodes; ++v) {
    if (uses[v] != 1) {
      throw StructuralError("node " + std::to_string(v) + " is used " + std::to_string(uses[v]) +
                            " times as a join operand");
    }
  }
  if (uses[n_nodes - 1] != 0) throw StructuralError("root is used as a join operand");
  // With unit use counts, a cycle would leave some node unreachable from the root.
  std::vector<bool> seen(n_nodes, false);
  std::vector<std::size_t> stack{n_nodes - 1};
  std::size_t visited = 0;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    if (seen[v]) throw StructuralError("plan contains a cycle");
    seen[v] = true;
    ++visited;
    if (v >= m) {
      stack.push_back(joins_[v - m].left);
      stack.push_back(joins_[v - m].right);
    }
  }
  if (visited != n_nodes) throw StructuralError("plan is not a single tree");
}

Plan Plan::leaf(std::size_t pattern) {
  Plan p;
  p.patterns_ = {pattern};
  return p;
}

Plan Plan::left_linear(std::span<const std::size_t> order) {
  if (order.empty()) throw StructuralError("left-linear plan needs at least one pattern");
  std::vector<std::size_t> patterns(order.begin(), order.end());
  std::sort(patterns.begin(), patterns.end());
  auto slot = [&](std::size_t pattern) {
    return static_cast<std::size_t>(std::lower_bound(patterns.begin(), patterns.end(), pattern) - patterns.begin());
  };
  const std::size_t m = order.size();
  std::vector<Join> joins;
  joins.reserve(m - 1);
  if (m >= 2) {
    joins.push_back({slot(order[0]), slot(order[1])});
    for (std::size_t i = 2; i < m; ++i) joins.push_back({m + i - 2, slot(order[i])});
  }
  return Plan(std::move(patterns), std::move(joins));
}

std::vector<std::size_t> Plan::parents() const {
  std::vector<std::size_t> parent(node_count());
  parent[root()] = root();
  for (std::size_t k = 0; k < joins_.size(); ++k) {
    parent[joins_[k].left] = size() + k;
    parent[joins_[k].right] = size() + k;
  }
  return parent;
}

std::vector<std::size_t> Plan::pattern_set(std::size_t node) const {
  std::vector<std::size_t> out;
  std::vector<std::size_t> stack{node};
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    if (is_leaf(v)) {
      out.push_back(patterns_[v]);
    } else {
      stack.push_back(join(v).left);
      stack.push_back(join(v).right);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t Plan::pattern_mask(std::size_t node) const {
  std::uint64_t mask = 0;
  for (std::size_t p : pattern_set(node)) {
    if (p >= 64) throw BudgetError("pattern masks support at most 64 patterns");
    mask |= std::uint64_t{1} << p;
  }
  return mask;
}

std::vector<std::size_t> Plan::leaf_order() const {
  if (!is_left_linear(*this)) throw StructuralError("leaf_order requires a left-linear plan");
  if (size() == 1) return {patterns_[0]};
  // Walk from the root down the join spine, collecting leaves in reverse.
  std::vector<std::size_t> reversed;
  std::size_t v = root();
  while (true) {
    const Join& j = join(v);
    if (!is_leaf(j.left)) {
      reversed.push_back(patterns_[j.right]);
      v = j.left;
    } else if (!is_leaf(j.right)) {
      reversed.push_back(patterns_[j.left]);
      v = j.right;
    } else {
      reversed.push_back(patterns_[j.right]);
      reversed.push_back(patterns_[j.left]);
      break;
    }
  }
  return {reversed.rbegin(), reversed.rend()};
}

Plan Plan::canonical() const {
  const std::size_t m = size();
  std::vector<std::size_t> min_pattern(node_count());
  std::function<std::size_t(std::size_t)> smallest = [&](std::size_t v) -> std::size_t {
    if (is_leaf(v)) return min_pattern[v] = patterns_[v];
    return min_pattern[v] = std::min(smallest(join(v).left), smallest(join(v).right));
  };
  smallest(root());

  std::vector<Join> joins;
  joins.reserve(joins_.size());
  // Returns the node id of `v` in the canonical plan.
  std::function<std::size_t(std::size_t)> emit = [&](std::size_t v) -> std::size_t {
    if (is_leaf(v)) return v;
    std::size_t a = join(v).left;
    std::size_t b = join(v).right;
    const bool a_join = !is_leaf(a);
    const bool b_join = !is_leaf(b);
    if ((b_join && !a_join) || (a_join == b_join && min_pattern[b] < min_pattern[a])) std::swap(a, b);
    const std::size_t ca = emit(a);
    const std::size_t cb = emit(b);
    joins.push_back({ca, cb});
    return m + joins.size() - 1;
  };
  emit(root());
  Plan out;
  out.patterns_ = patterns_;
  out.joins_ = std::move(joins);
  return out;
}

bool is_left_linear(const Plan& plan) {
  const std::size_t m = plan.size();
  if (m == 1) return true;
  for (const Join& j : plan.joins()) {
    if (!plan.is_leaf(j.left) && !plan.is_leaf(j.right)) return false;
  }
  const Join& first = plan.join(m);
  return plan.is_leaf(first.left) && plan.is_leaf(first.right);
}

std::string to_string(const Plan& plan) {
  std::function<void(std::ostringstream&, std::size_t)> emit = [&](std::ostringstream& os, std::size_t v) {
    if (plan.is_leaf(v)) {
      os << 't' << plan.patterns()[v] + 1;
      return;
    }
    os << '(';
    emit(os, plan.join(v).left);
    os << " ⋈ ";
    emit(os, plan.join(v).right);
    os << ')';
  };
  std::ostringstream os;
  emit(os, plan.root());
  return os.str();
}

}  // namespace joinrelax
