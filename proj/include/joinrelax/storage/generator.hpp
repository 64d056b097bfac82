#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "joinrelax/plan/query.hpp"
#include "joinrelax/storage/triple_store.hpp"

namespace joinrelax {

struct GenConfig {
  // Store.
  std::size_t entities = 1000;
  std::size_t predicates = 12;
  std::size_t triples = 6000;
  double predicate_skew = 0.8;  // Zipf exponents of predicate, subject and object choice
  double subject_skew = 0.9;
  double object_skew = 0.6;
  std::size_t max_fanout = 5;  // cap on triples sharing one (subject, predicate)

  // Queries.
  std::vector<QueryShape> shapes{QueryShape::kStar};
  std::size_t min_patterns = 2;
  std::size_t max_patterns = 8;
  std::size_t queries_per_size = 20;
  double constant_object_probability = 0.3;  // stars only; paths are all-variable chains
  std::size_t max_retries = 2000;
  std::size_t row_cap = 2'000'000;  // largest tolerated |Ω(S)| over connected subsets S
                                     // 0 skips the check (queries are satisfiable by construction)

  std::uint64_t seed = 1;
};

struct GeneratedData {
  TripleStore store;
  std::vector<Query> queries;
};

// Deterministic for a fixed config. Queries are grown from triples that exist in the
// store, so every query has at least one solution.
GeneratedData generate_synthetic(const GenConfig& config);

TripleStore generate_store(const GenConfig& config);

// One query of the given shape and size. Star: patterns (?v0, p_i, o_i) with distinct
// constant predicates, objects constant or fresh variables. Path: (?v0,p1,?v1),
// (?v1,p2,?v2), ... Throws GenerationError naming the size after max_retries failures.
Query generate_query(const TripleStore& store, QueryShape shape, std::size_t n, const GenConfig& config,
                     std::mt19937_64& rng);

}  // namespace joinrelax
