#pragma once

#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "joinrelax/plan/plan.hpp"
#include "joinrelax/plan/query.hpp"
#include "joinrelax/storage/bindings.hpp"
#include "joinrelax/storage/triple_store.hpp"

namespace joinrelax {

// Bitmask over query pattern indices.
using PatternSet = std::uint64_t;

// Exact |Ω(S)| for any subset S of a query's patterns. Mapping sets of variable-disjoint
// pattern groups combine as a cross product, so S is split into its connected components
// (patterns linked by shared variables); each component is materialised with hash joins and
// the component cardinalities are multiplied. Results are cached per subset.
class CardinalityOracle {
 public:
  static constexpr std::size_t kDefaultRowCap = 4'000'000;

  CardinalityOracle(const TripleStore& store, const Query& query, std::size_t row_cap = kDefaultRowCap);

  double cardinality(PatternSet set);
  std::vector<PatternSet> components(PatternSet set) const;
  const Query& query() const { return *query_; }

 private:
  double component_cardinality(PatternSet component);

  const TripleStore* store_;
  const Query* query_;
  std::size_t row_cap_;
  std::vector<PatternSet> neighbours_;
  std::vector<BindingsTable> pattern_tables_;
  std::unordered_map<PatternSet, double> cache_;
};

struct CoutResult {
  double total = 0.0;
  // |Ω(v)| for every plan node v (leaves included; leaves contribute 0 to the total).
  std::vector<double> node_cardinality;
};

// C_out: the sum of the cardinalities of all join nodes.
CoutResult c_out(CardinalityOracle& oracle, const Plan& plan);
CoutResult c_out_true(const TripleStore& store, const Query& query, const Plan& plan);

}  // namespace joinrelax
