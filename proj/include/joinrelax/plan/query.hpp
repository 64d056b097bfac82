#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace joinrelax {

using EntityId = std::uint32_t;

// Constant that does not name any entity of the store it is matched against.
inline constexpr EntityId kUnknownEntity = std::numeric_limits<EntityId>::max();

// One position of a triple pattern: a constant entity or a named variable.
class Term {
 public:
  static Term constant(EntityId id) { return Term(id, {}); }
  static Term variable(std::string name);  // "?name"

  bool is_variable() const { return !name_.empty(); }
  bool is_constant() const { return name_.empty(); }
  EntityId id() const { return id_; }
  const std::string& name() const { return name_; }

  bool operator==(const Term&) const = default;

 private:
  Term(EntityId id, std::string name) : id_(id), name_(std::move(name)) {}

  EntityId id_ = kUnknownEntity;
  std::string name_;  // empty for constants
};

struct TriplePattern {
  Term s;
  Term p;
  Term o;

  // Distinct variable names in s, p, o order.
  std::vector<std::string> variables() const;
  bool shares_variable(const TriplePattern& other) const;

  bool operator==(const TriplePattern&) const = default;
};

enum class QueryShape { kStar, kPath, kOther };

std::string_view to_string(QueryShape shape);
QueryShape parse_shape(std::string_view text);

// Ordered conjunctive query; pattern i is leaf i of every plan over the query.
struct Query {
  std::string id;
  QueryShape shape = QueryShape::kOther;
  std::vector<TriplePattern> patterns;

  std::size_t size() const { return patterns.size(); }
};

}  // namespace joinrelax
