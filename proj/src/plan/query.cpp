#include "joinrelax/plan/query.hpp"

#include <algorithm>

#include "joinrelax/error.hpp"

namespace joinrelax {

Term Term::variable(std::string name) {
  if (name.size() < 2 || name.front() != '?') throw StructuralError("variable names start with '?': " + name);
  return Term(kUnknownEntity, std::move(name));
}

std::vector<std::string> TriplePattern::variables() const {
  std::vector<std::string> vars;
  for (const Term* term : {&s, &p, &o}) {
    if (term->is_variable() &&
        std::find(vars.begin(), vars.end(), term->name()) == vars.end()) {
      vars.push_back(term->name());
    }
  }
  return vars;
}

bool TriplePattern::shares_variable(const TriplePattern& other) const {
  for (const auto& a : variables()) {
    for (const auto& b : other.variables()) {
      if (a == b) return true;
    }
  }
  return false;
}

std::string_view to_string(QueryShape shape) {
  switch (shape) {
    case QueryShape::kStar: return "star";
    case QueryShape::kPath: return "path";
    case QueryShape::kOther: return "other";
  }
  return "other";
}

QueryShape parse_shape(std::string_view text) {
  if (text == "star") return QueryShape::kStar;
  if (text == "path") return QueryShape::kPath;
  if (text == "other") return QueryShape::kOther;
  throw FormatError("unknown query shape '" + std::string(text) + "'");
}

}  // namespace joinrelax
