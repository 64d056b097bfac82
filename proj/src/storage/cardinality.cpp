#include "joinrelax/storage/cardinality.hpp"

#include <bit>

#include "joinrelax/error.hpp"

namespace joinrelax {

CardinalityOracle::CardinalityOracle(const TripleStore& store, const Query& query, std::size_t row_cap)
    : store_(&store), query_(&query), row_cap_(row_cap) {
  const std::size_t n = query.size();
  if (n == 0 || n > 64) throw StructuralError("cardinality oracle supports 1..64 patterns");
  neighbours_.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && query.patterns[i].shares_variable(query.patterns[j])) neighbours_[i] |= PatternSet{1} << j;
    }
  }
  pattern_tables_.reserve(n);
  for (const auto& tp : query.patterns) pattern_tables_.push_back(match_pattern(store, tp));
}

std::vector<PatternSet> CardinalityOracle::components(PatternSet set) const {
  std::vector<PatternSet> out;
  PatternSet rest = set;
  while (rest) {
    PatternSet comp = rest & (~rest + 1);  // lowest pattern
    PatternSet frontier = comp;
    while (frontier) {
      const int i = std::countr_zero(frontier);
      frontier &= frontier - 1;
      const PatternSet fresh = neighbours_[static_cast<std::size_t>(i)] & set & ~comp;
      comp |= fresh;
      frontier |= fresh;
    }
    out.push_back(comp);
    rest &= ~comp;
  }
  return out;
}

double CardinalityOracle::component_cardinality(PatternSet component) {
  if (auto it = cache_.find(component); it != cache_.end()) return it->second;
  // Join in BFS order so every step shares a variable with the accumulated table.
  int first = std::countr_zero(component);
  BindingsTable acc = pattern_tables_[static_cast<std::size_t>(first)];
  PatternSet joined = PatternSet{1} << first;
  while (joined != component && !acc.empty()) {
    PatternSet candidates = component & ~joined;
    PatternSet linked = 0;
    for (PatternSet j = joined; j; j &= j - 1) linked |= neighbours_[static_cast<std::size_t>(std::countr_zero(j))];
    const PatternSet pick = (candidates & linked) ? (candidates & linked) : candidates;
    const int next = std::countr_zero(pick);
    acc = join(acc, pattern_tables_[static_cast<std::size_t>(next)]);
    joined |= PatternSet{1} << next;
    if (acc.size() > row_cap_) {
      throw BudgetError("intermediate result of query '" + query_->id + "' exceeds " +
                        std::to_string(row_cap_) + " rows");
    }
  }
  const double card = joined == component ? static_cast<double>(acc.size()) : 0.0;
  cache_.emplace(component, card);
  return card;
}

double CardinalityOracle::cardinality(PatternSet set) {
  if (set == 0) return 1.0;
  if (auto it = cache_.find(set); it != cache_.end()) return it->second;
  double card = 1.0;
  for (PatternSet comp : components(set)) {
    card *= component_cardinality(comp);
    if (card == 0.0) break;
  }
  cache_.emplace(set, card);
  return card;
}

CoutResult c_out(CardinalityOracle& oracle, const Plan& plan) {
  for (std::size_t p : plan.patterns()) {
    if (p >= oracle.query().size()) {
      throw StructuralError("plan references pattern " + std::to_string(p) + " of a query with " +
                            std::to_string(oracle.query().size()) + " patterns");
    }
  }
  CoutResult result;
  result.node_cardinality.resize(plan.node_count());
  for (std::size_t v = 0; v < plan.node_count(); ++v) {
    const double card = oracle.cardinality(plan.pattern_mask(v));
    result.node_cardinality[v] = card;
    if (!plan.is_leaf(v)) result.total += card;
  }
  return result;
}

CoutResult c_out_true(const TripleStore& store, const Query& query, const Plan& plan) {
  CardinalityOracle oracle(store, query);
  return c_out(oracle, plan);
}

}  // namespace joinrelax
