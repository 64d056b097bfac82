#include "joinrelax/storage/generator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "joinrelax/error.hpp"
#include "joinrelax/random.hpp"
#include "joinrelax/storage/cardinality.hpp"

namespace joinrelax {

namespace {

std::discrete_distribution<std::size_t> zipf(std::size_t n, double exponent) {
  std::vector<double> weights(n);
  for (std::size_t i = 0; i < n; ++i) weights[i] = 1.0 / std::pow(static_cast<double>(i + 1), exponent);
  return {weights.begin(), weights.end()};
}

std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

std::string pad3(std::size_t i) {
  std::string s = std::to_string(i);
  return std::string(s.size() < 3 ? 3 - s.size() : 0, '0') + s;
}

// Every subset's cardinality must stay under the row cap for plans over the query to be
// costable exactly.
bool within_row_cap(const TripleStore& store, const Query& query, std::size_t row_cap) {
  if (row_cap == 0) return true;
  try {
    CardinalityOracle oracle(store, query, row_cap);
    const PatternSet all = (PatternSet{1} << query.size()) - 1;
    for (PatternSet s = 1; s <= all; ++s) {
      for (PatternSet comp : oracle.components(s)) {
        if (oracle.cardinality(comp) > static_cast<double>(row_cap)) return false;
      }
    }
    return oracle.cardinality(all) >= 1.0;
  } catch (const BudgetError&) {
    return false;
  }
}

}  // namespace

TripleStore generate_store(const GenConfig& config) {
  if (config.entities == 0 || config.predicates == 0) throw GenerationError("store needs entities and predicates");
  std::mt19937_64 rng(splitmix64(config.seed));
  TripleStoreBuilder builder;
  std::vector<EntityId> predicate_ids(config.predicates), entity_ids(config.entities);
  for (std::size_t i = 0; i < config.predicates; ++i) predicate_ids[i] = builder.intern("p" + std::to_string(i));
  for (std::size_t i = 0; i < config.entities; ++i) entity_ids[i] = builder.intern("e" + std::to_string(i));

  // Popularity ranks differ between subject and object roles.
  std::vector<std::size_t> subject_rank(config.entities), object_rank(config.entities);
  std::iota(subject_rank.begin(), subject_rank.end(), 0);
  std::iota(object_rank.begin(), object_rank.end(), 0);
  std::shuffle(subject_rank.begin(), subject_rank.end(), rng);
  std::shuffle(object_rank.begin(), object_rank.end(), rng);

  auto pick_p = zipf(config.predicates, config.predicate_skew);
  auto pick_s = zipf(config.entities, config.subject_skew);
  auto pick_o = zipf(config.entities, config.object_skew);

  std::set<Triple> seen;
  std::map<std::pair<EntityId, EntityId>, std::size_t> fanout;
  const std::size_t max_attempts = config.triples * 50 + 100;
  for (std::size_t attempt = 0; attempt < max_attempts && seen.size() < config.triples; ++attempt) {
    const EntityId p = predicate_ids[pick_p(rng)];
    const EntityId s = entity_ids[subject_rank[pick_s(rng)]];
    const EntityId o = entity_ids[object_rank[pick_o(rng)]];
    if (s == o) continue;
    auto& f = fanout[{s, p}];
    if (f >= config.max_fanout) continue;
    if (seen.insert({s, p, o}).second) {
      ++f;
      builder.add(Triple{s, p, o});
    }
  }
  return std::move(builder).build();
}

Query generate_query(const TripleStore& store, QueryShape shape, std::size_t n, const GenConfig& config,
                     std::mt19937_64& rng) {
  if (n == 0) throw GenerationError("query size must be positive");
  if (store.size() == 0) throw GenerationError("cannot generate queries over an empty store");
  const auto triples = store.triples();
  std::bernoulli_distribution constant_object(config.constant_object_probability);

  for (std::size_t attempt = 0; attempt < config.max_retries; ++attempt) {
    Query q;
    q.shape = shape;
    if (shape == QueryShape::kStar) {
      const EntityId subject = triples[uniform_index(rng, triples.size())].s;
      const auto out = store.lookup(subject, std::nullopt, std::nullopt);
      std::vector<EntityId> preds;
      for (const Triple& t : out) {
        if (preds.empty() || preds.back() != t.p) preds.push_back(t.p);
      }
      if (preds.size() < n) continue;
      std::shuffle(preds.begin(), preds.end(), rng);
      preds.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        const auto matches = store.lookup(subject, preds[i], std::nullopt);
        const Triple& t = matches[uniform_index(rng, matches.size())];
        const Term object = constant_object(rng) ? Term::constant(t.o) : Term::variable("?v" + std::to_string(i + 1));
        q.patterns.push_back({Term::variable("?v0"), Term::constant(t.p), object});
      }
    } else if (shape == QueryShape::kPath) {
      Triple t = triples[uniform_index(rng, triples.size())];
      q.patterns.push_back({Term::variable("?v0"), Term::constant(t.p), Term::variable("?v1")});
      bool dead_end = false;
      for (std::size_t i = 1; i < n; ++i) {
        const auto next = store.lookup(t.o, std::nullopt, std::nullopt);
        if (next.empty()) {
          dead_end = true;
          break;
        }
        t = next[uniform_index(rng, next.size())];
        q.patterns.push_back({Term::variable("?v" + std::to_string(i)), Term::constant(t.p),
                              Term::variable("?v" + std::to_string(i + 1))});
      }
      if (dead_end) continue;
    } else {
      throw GenerationError("generator supports star and path shapes only");
    }
    if (within_row_cap(store, q, config.row_cap)) return q;
  }
  throw GenerationError("could not generate a " + std::string(to_string(shape)) + " query with " +
                        std::to_string(n) + " patterns after " + std::to_string(config.max_retries) +
                        " attempts");
}

GeneratedData generate_synthetic(const GenConfig& config) {
  if (config.min_patterns == 0 || config.min_patterns > config.max_patterns) {
    throw GenerationError("invalid query size range");
  }
  GeneratedData data{generate_store(config), {}};
  std::mt19937_64 rng(splitmix64(config.seed ^ 0x5157ULL));
  for (QueryShape shape : config.shapes) {
    for (std::size_t n = config.min_patterns; n <= config.max_patterns; ++n) {
      for (std::size_t i = 0; i < config.queries_per_size; ++i) {
        Query q = generate_query(data.store, shape, n, config, rng);
        q.id = std::string(to_string(shape)) + "_" + std::to_string(n) + "_" + pad3(i);
        data.queries.push_back(std::move(q));
      }
    }
  }
  return data;
}

}  // namespace joinrelax
