#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "joinrelax/plan/query.hpp"
#include "joinrelax/storage/triple_store.hpp"

namespace joinrelax {

// A set of solution mappings over named columns. Rows are kept sorted and unique.
class BindingsTable {
 public:
  BindingsTable() = default;
  explicit BindingsTable(std::vector<std::string> columns);

  // Zero columns and a single empty row: the identity of join.
  static BindingsTable unit();

  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t arity() const { return columns_.size(); }
  std::size_t size() const { return rows_; }
  bool empty() const { return rows_ == 0; }

  std::span<const EntityId> row(std::size_t i) const {
    return {cells_.data() + i * arity(), arity()};
  }
  // Position of `name` in columns(), or arity() if absent.
  std::size_t column_index(const std::string& name) const;

  void add_row(std::span<const EntityId> values);
  // Sorts rows and removes duplicates.
  void normalize();

  // Rows re-expressed with columns in lexicographic name order, sorted. Two tables denote
  // the same mapping set iff their canonical_rows and sorted column lists agree.
  std::vector<std::vector<EntityId>> canonical_rows() const;
  std::vector<std::string> sorted_columns() const;

 private:
  std::vector<std::string> columns_;
  std::vector<EntityId> cells_;
  std::size_t rows_ = 0;
};

// Solution mappings of a single pattern, read through the store's indexes.
BindingsTable match_pattern(const TripleStore& store, const TriplePattern& pattern);

// Hash join on shared columns (a cross product when none are shared). Output columns are
// left's columns followed by right's columns that left lacks. Inputs must be duplicate-free
// (every table from match_pattern or join is); the result then is too.
BindingsTable join(const BindingsTable& left, const BindingsTable& right);

}  // namespace joinrelax
