#include "joinrelax/relax/penalties.hpp"

#include "joinrelax/error.hpp"

namespace joinrelax::relax {

using namespace tensor;

namespace {

Eigen::Index checked_size(Var a, std::size_t n) {
  if (n < 2) throw StructuralError("penalties need at least two patterns");
  const auto size = static_cast<Eigen::Index>(2 * n - 1);
  if (a.rows() != size || a.cols() != size) {
    throw StructuralError("adjacency of " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                          " does not match n=" + std::to_string(n));
  }
  return size;
}

Var squared_offset(Var v, double target) { return sum_all(square(add_scalar(v, -target))); }

}  // namespace

DegreePenalties degree_penalties(Var a, std::size_t n) {
  const Eigen::Index size = checked_size(a, n);
  const auto leaves = static_cast<Eigen::Index>(n);
  const Eigen::Index root = size - 1;
  const Var out = sum_rows(a);  // size x 1
  const Var in = sum_cols(a);   // 1 x size

  DegreePenalties p;
  p.to = squared_offset(slice(out, 0, 0, leaves, 1), 1.0);
  p.ji = squared_offset(slice(in, 0, leaves, 1, size - leaves), 2.0);
  p.jo = square(slice(out, root, 0, 1, 1));
  if (root > leaves) p.jo = add(p.jo, squared_offset(slice(out, leaves, 0, root - leaves, 1), 1.0));
  return p;
}

Var left_linear_penalty(Var a, std::size_t n) {
  const Eigen::Index size = checked_size(a, n);
  const auto leaves = static_cast<Eigen::Index>(n);
  const Eigen::Index joins = size - leaves;
  const Var tp = slice(sum_cols(slice(a, 0, 0, leaves, size)), 0, leaves, 1, joins);       // c_tp over joins
  const Var jn = slice(sum_cols(slice(a, leaves, 0, joins, size)), 0, leaves, 1, joins);  // c_jn over joins
  Var p = add(squared_offset(slice(tp, 0, 0, 1, 1), 2.0), square(slice(jn, 0, 0, 1, 1)));
  if (joins > 1) {
    p = add(p, squared_offset(slice(tp, 0, 1, 1, joins - 1), 1.0));
    p = add(p, squared_offset(slice(jn, 0, 1, 1, joins - 1), 1.0));
  }
  return p;
}

Var acyclicity_penalty(Var a) {
  if (a.rows() != a.cols()) throw StructuralError("acyclicity penalty needs a square matrix");
  return add_scalar(trace_expm(a), -static_cast<double>(a.rows()));
}

Penalties all_penalties(Var a, std::size_t n) {
  const DegreePenalties d = degree_penalties(a, n);
  return {d.to, d.ji, d.jo, left_linear_penalty(a, n), acyclicity_penalty(a)};
}

Var structural_penalty(const Penalties& p, const PenaltyWeights& w) {
  Var total = scale(p.to, w.to);
  total = add(total, scale(p.ji, w.ji));
  total = add(total, scale(p.jo, w.jo));
  total = add(total, scale(p.ll, w.ll));
  return add(total, scale(p.acyc, w.acyc));
}

Var total_loss(Var cost, Var p_struct, std::size_t t, const SearchConfig& config) {
  return add(cost, scale(p_struct, penalty_ramp(t, config)));
}

}  // namespace joinrelax::relax
