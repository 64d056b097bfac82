#include "joinrelax/storage/bindings.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <unordered_map>

#include "joinrelax/error.hpp"

namespace joinrelax {

BindingsTable::BindingsTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
  auto sorted = columns_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw StructuralError("duplicate column name in bindings table");
  }
}

BindingsTable BindingsTable::unit() {
  BindingsTable t;
  t.rows_ = 1;
  return t;
}

std::size_t BindingsTable::column_index(const std::string& name) const {
  return static_cast<std::size_t>(std::find(columns_.begin(), columns_.end(), name) - columns_.begin());
}

void BindingsTable::add_row(std::span<const EntityId> values) {
  if (values.size() != arity()) throw StructuralError("row arity does not match column count");
  cells_.insert(cells_.end(), values.begin(), values.end());
  ++rows_;
}

void BindingsTable::normalize() {
  const std::size_t k = arity();
  if (k == 0) {
    rows_ = std::min<std::size_t>(rows_, 1);
    return;
  }
  std::vector<std::size_t> order(rows_);
  std::iota(order.begin(), order.end(), 0);
  auto less = [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(cells_.begin() + a * k, cells_.begin() + (a + 1) * k,
                                        cells_.begin() + b * k, cells_.begin() + (b + 1) * k);
  };
  auto equal = [&](std::size_t a, std::size_t b) {
    return std::equal(cells_.begin() + a * k, cells_.begin() + (a + 1) * k, cells_.begin() + b * k);
  };
  std::sort(order.begin(), order.end(), less);
  order.erase(std::unique(order.begin(), order.end(), equal), order.end());
  std::vector<EntityId> cells;
  cells.reserve(order.size() * k);
  for (std::size_t r : order) cells.insert(cells.end(), cells_.begin() + r * k, cells_.begin() + (r + 1) * k);
  cells_ = std::move(cells);
  rows_ = order.size();
}

std::vector<std::string> BindingsTable::sorted_columns() const {
  auto cols = columns_;
  std::sort(cols.begin(), cols.end());
  return cols;
}

std::vector<std::vector<EntityId>> BindingsTable::canonical_rows() const {
  std::vector<std::size_t> perm(arity());
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return columns_[a] < columns_[b]; });
  std::vector<std::vector<EntityId>> out;
  out.reserve(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    std::vector<EntityId> v;
    v.reserve(arity());
    for (std::size_t c : perm) v.push_back(row(r)[c]);
    out.push_back(std::move(v));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

BindingsTable match_pattern(const TripleStore& store, const TriplePattern& pattern) {
  const auto vars = pattern.variables();
  BindingsTable table(vars);
  const Term* terms[3] = {&pattern.s, &pattern.p, &pattern.o};

  std::optional<EntityId> bound[3];
  for (int i = 0; i < 3; ++i) {
    if (terms[i]->is_constant()) {
      if (terms[i]->id() >= store.dictionary().size()) return table;  // unknown constant
      bound[i] = terms[i]->id();
    }
  }
  // Column of each position (arity() for constants).
  std::size_t column[3];
  for (int i = 0; i < 3; ++i) {
    column[i] = terms[i]->is_variable() ? table.column_index(terms[i]->name()) : vars.size();
  }

  std::vector<EntityId> values(vars.size());
  for (const Triple& t : store.lookup(bound[0], bound[1], bound[2])) {
    const EntityId pos[3] = {t.s, t.p, t.o};
    std::fill(values.begin(), values.end(), kUnknownEntity);
    bool consistent = true;
    for (int i = 0; i < 3 && consistent; ++i) {
      if (column[i] == vars.size()) continue;
      EntityId& slot = values[column[i]];
      if (slot != kUnknownEntity && slot != pos[i]) consistent = false;  // repeated variable
      slot = pos[i];
    }
    if (consistent) table.add_row(values);
  }
  table.normalize();
  return table;
}

namespace {

std::uint64_t hash_key(std::span<const EntityId> row, const std::vector<std::size_t>& cols) {
  std::uint64_t h = 1469598103934665603ULL;
  for (std::size_t c : cols) {
    h ^= row[c] + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

bool keys_equal(std::span<const EntityId> a, const std::vector<std::size_t>& ca,
                std::span<const EntityId> b, const std::vector<std::size_t>& cb) {
  for (std::size_t i = 0; i < ca.size(); ++i) {
    if (a[ca[i]] != b[cb[i]]) return false;
  }
  return true;
}

}  // namespace

BindingsTable join(const BindingsTable& left, const BindingsTable& right) {
  std::vector<std::string> columns = left.columns();
  std::vector<std::size_t> left_shared, right_shared, right_extra;
  for (std::size_t c = 0; c < right.arity(); ++c) {
    const std::size_t l = left.column_index(right.columns()[c]);
    if (l < left.arity()) {
      left_shared.push_back(l);
      right_shared.push_back(c);
    } else {
      right_extra.push_back(c);
      columns.push_back(right.columns()[c]);
    }
  }
  BindingsTable out(std::move(columns));
  if (left.empty() || right.empty()) return out;

  // Build on the smaller input, probe with the larger.
  const bool build_left = left.size() <= right.size();
  const BindingsTable& build = build_left ? left : right;
  const BindingsTable& probe = build_left ? right : left;
  const auto& build_cols = build_left ? left_shared : right_shared;
  const auto& probe_cols = build_left ? right_shared : left_shared;

  std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets;
  buckets.reserve(build.size());
  for (std::size_t r = 0; r < build.size(); ++r) buckets[hash_key(build.row(r), build_cols)].push_back(r);

  std::vector<EntityId> values(out.arity());
  for (std::size_t pr = 0; pr < probe.size(); ++pr) {
    const auto prow = probe.row(pr);
    auto it = buckets.find(hash_key(prow, probe_cols));
    if (it == buckets.end()) continue;
    for (std::size_t br : it->second) {
      const auto brow = build.row(br);
      if (!keys_equal(brow, build_cols, prow, probe_cols)) continue;
      const auto lrow = build_left ? brow : prow;
      const auto rrow = build_left ? prow : brow;
      std::copy(lrow.begin(), lrow.end(), values.begin());
      for (std::size_t i = 0; i < right_extra.size(); ++i) values[left.arity() + i] = rrow[right_extra[i]];
      out.add_row(values);
    }
  }
  // Duplicate-free inputs give a duplicate-free join, so no normalisation pass is needed.
  return out;
}

}  // namespace joinrelax
