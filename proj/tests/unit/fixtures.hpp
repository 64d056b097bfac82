#pragma once

#include <random>
#include <string>
#include <vector>

#include "joinrelax/plan/plan.hpp"
#include "joinrelax/plan/query.hpp"
#include "joinrelax/storage/triple_store.hpp"

namespace fixtures {

using namespace joinrelax;

// Small store with a few predicates and dense links, so joins produce non-trivial results.
inline TripleStore small_store(std::uint64_t seed, std::size_t entities = 12, std::size_t triples = 60) {
  std::mt19937_64 rng(seed);
  TripleStoreBuilder b;
  std::uniform_int_distribution<std::size_t> e(0, entities - 1), p(0, 2);
  for (std::size_t i = 0; i < triples; ++i) {
    b.add("e" + std::to_string(e(rng)), "p" + std::to_string(p(rng)), "e" + std::to_string(e(rng)));
  }
  return std::move(b).build();
}

inline Term var(const std::string& name) { return Term::variable("?" + name); }

inline Term con(const TripleStore& store, const std::string& label) {
  const auto id = store.dictionary().find(label);
  return Term::constant(id ? *id : kUnknownEntity);
}

// Path ?x0 p? ?x1 . ?x1 p? ?x2 ... with predicates cycling through p0..p2.
inline Query path_query(const TripleStore& store, std::size_t n) {
  Query q{"path", QueryShape::kPath, {}};
  for (std::size_t i = 0; i < n; ++i) {
    q.patterns.push_back({var("x" + std::to_string(i)), con(store, "p" + std::to_string(i % 3)),
                          var("x" + std::to_string(i + 1))});
  }
  return q;
}

inline Query star_query(const TripleStore& store, std::size_t n) {
  Query q{"star", QueryShape::kStar, {}};
  for (std::size_t i = 0; i < n; ++i) {
    q.patterns.push_back({var("s"), con(store, "p" + std::to_string(i % 3)), var("o" + std::to_string(i))});
  }
  return q;
}

// Every left-linear plan over n patterns.
std::vector<Plan> all_left_linear(std::size_t n);

}  // namespace fixtures
