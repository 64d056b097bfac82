#include "joinrelax/plan/matrix.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "joinrelax/error.hpp"

namespace joinrelax {

Matrix encode(const Plan& plan) {
  const auto n_nodes = static_cast<Eigen::Index>(plan.node_count());
  Matrix a = Matrix::Zero(n_nodes, n_nodes);
  for (std::size_t k = 0; k < plan.joins().size(); ++k) {
    const auto parent = static_cast<Eigen::Index>(plan.size() + k);
    a(static_cast<Eigen::Index>(plan.joins()[k].left), parent) = 1.0;
    a(static_cast<Eigen::Index>(plan.joins()[k].right), parent) = 1.0;
  }
  return a;
}

namespace {

std::string join_nodes(const std::vector<std::size_t>& nodes) {
  std::ostringstream os;
  for (std::size_t i = 0; i < nodes.size(); ++i) os << (i ? "," : "") << nodes[i];
  return os.str();
}

void report(std::vector<Violation>& out, ViolationKind kind, std::vector<std::size_t> nodes, std::string what) {
  out.push_back({kind, nodes, what + " at node(s) " + join_nodes(nodes)});
}

}  // namespace

DecodeResult decode_checked(const Matrix& a) {
  DecodeResult result;
  auto& v = result.violations;
  if (a.rows() != a.cols() || a.rows() % 2 == 0) {
    v.push_back({ViolationKind::kEvenDimension, {},
                 "matrix is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                     ", expected square with odd dimension"});
    return result;
  }
  const auto n_nodes = static_cast<std::size_t>(a.rows());
  const std::size_t m = (n_nodes + 1) / 2;
  const std::size_t root = n_nodes - 1;

  std::vector<std::size_t> non_binary;
  for (std::size_t i = 0; i < n_nodes; ++i) {
    for (std::size_t j = 0; j < n_nodes; ++j) {
      const double x = a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (x != 0.0 && x != 1.0) non_binary.push_back(i);
    }
  }
  if (!non_binary.empty()) {
    non_binary.erase(std::unique(non_binary.begin(), non_binary.end()), non_binary.end());
    report(v, ViolationKind::kNonBinaryEntry, non_binary, "non-binary entry in row");
    return result;
  }

  std::vector<std::size_t> self_loops, pattern_in, out_degree, join_in;
  std::vector<std::vector<std::size_t>> children(n_nodes);
  std::vector<std::vector<std::size_t>> targets(n_nodes);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    for (std::size_t j = 0; j < n_nodes; ++j) {
      if (a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) == 1.0) {
        targets[i].push_back(j);
        children[j].push_back(i);
      }
    }
    if (a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) == 1.0) self_loops.push_back(i);
  }
  for (std::size_t j = 0; j < m; ++j) {
    if (!children[j].empty()) pattern_in.push_back(j);
  }
  for (std::size_t i = 0; i < root; ++i) {
    if (targets[i].size() != 1) out_degree.push_back(i);
  }
  for (std::size_t j = m; j < n_nodes; ++j) {
    if (children[j].size() != 2) join_in.push_back(j);
  }
  if (!self_loops.empty()) report(v, ViolationKind::kSelfLoop, self_loops, "self loop");
  if (!pattern_in.empty()) report(v, ViolationKind::kPatternInEdge, pattern_in, "triple pattern receives an edge");
  if (!out_degree.empty()) report(v, ViolationKind::kOutDegree, out_degree, "out-degree != 1");
  if (!targets[root].empty()) report(v, ViolationKind::kRootOutEdge, {root}, "root has an out-edge");
  if (!join_in.empty()) report(v, ViolationKind::kJoinInDegree, join_in, "join in-degree != 2");

  // Cycles: colour-based DFS over out-edges.
  std::vector<int> colour(n_nodes, 0);
  std::vector<std::size_t> on_cycle;
  std::vector<std::size_t> path;
  std::function<void(std::size_t)> dfs = [&](std::size_t u) {
    colour[u] = 1;
    path.push_back(u);
    for (std::size_t w : targets[u]) {
      if (colour[w] == 1) {
        auto it = std::find(path.begin(), path.end(), w);
        on_cycle.insert(on_cycle.end(), it, path.end());
      } else if (colour[w] == 0) {
        dfs(w);
      }
    }
    path.pop_back();
    colour[u] = 2;
  };
  for (std::size_t u = 0; u < n_nodes; ++u) {
    if (colour[u] == 0) dfs(u);
  }
  if (!on_cycle.empty()) {
    std::sort(on_cycle.begin(), on_cycle.end());
    on_cycle.erase(std::unique(on_cycle.begin(), on_cycle.end()), on_cycle.end());
    report(v, ViolationKind::kCycle, on_cycle, "cycle");
  }

  // Reachability of the root, walking in-edges backwards from it.
  std::vector<bool> reaches(n_nodes, false);
  std::vector<std::size_t> stack{root};
  reaches[root] = true;
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    for (std::size_t c : children[u]) {
      if (!reaches[c]) {
        reaches[c] = true;
        stack.push_back(c);
      }
    }
  }
  std::vector<std::size_t> detached;
  for (std::size_t u = 0; u < n_nodes; ++u) {
    if (!reaches[u]) detached.push_back(u);
  }
  if (!detached.empty()) report(v, ViolationKind::kDisconnected, detached, "not connected to the root");

  if (!v.empty()) return result;

  std::vector<std::size_t> patterns(m);
  for (std::size_t i = 0; i < m; ++i) patterns[i] = i;
  std::vector<Join> joins;
  for (std::size_t j = m; j < n_nodes; ++j) joins.push_back({children[j][0], children[j][1]});
  result.plan = Plan(std::move(patterns), std::move(joins)).canonical();
  return result;
}

PlanDecodeError::PlanDecodeError(std::vector<Violation> violations)
    : std::runtime_error([&] {
        std::string msg = "invalid plan matrix:";
        for (const auto& v : violations) msg += " [" + v.message + "]";
        return msg;
      }()),
      violations_(std::move(violations)) {}

Plan decode(const Matrix& matrix) {
  auto result = decode_checked(matrix);
  if (!result.plan) throw PlanDecodeError(std::move(result.violations));
  return std::move(*result.plan);
}

Matrix interpolate(const Matrix& p1, const Matrix& p2, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("interpolation weight must lie in [0, 1]");
  if (p1.rows() != p2.rows() || p1.cols() != p2.cols()) {
    throw StructuralError("cannot interpolate matrices of different shapes");
  }
  if (alpha == 0.0) return p1;
  if (alpha == 1.0) return p2;
  return (1.0 - alpha) * p1 + alpha * p2;
}

}  // namespace joinrelax
