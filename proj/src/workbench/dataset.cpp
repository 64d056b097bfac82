#include "joinrelax/workbench/dataset.hpp"

#include <algorithm>
#include <json.hpp>
#include <map>
#include <numeric>
#include <random>

#include "joinrelax/costmodel/features.hpp"
#include "joinrelax/error.hpp"
#include "joinrelax/plan/io.hpp"
#include "joinrelax/plan/matrix.hpp"
#include "joinrelax/random.hpp"
#include "joinrelax/storage/cardinality.hpp"
#include "joinrelax/storage/io.hpp"
#include "joinrelax/workbench/csv.hpp"

namespace joinrelax::workbench {

namespace fs = std::filesystem;

GenConfig default_generator(std::uint64_t seed) {
  GenConfig g;
  g.shapes = {QueryShape::kStar, QueryShape::kPath};
  g.min_patterns = 2;
  g.max_patterns = 8;
  g.seed = seed;
  return g;
}

std::vector<std::size_t> random_order(const Query& query, bool allow_cross_products, std::mt19937_64& rng) {
  std::vector<std::size_t> order(query.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  if (allow_cross_products) return order;
  // Pick uniformly among the remaining patterns connected to the prefix.
  std::vector<std::size_t> rest(order.begin() + 1, order.end());
  order.resize(1);
  while (!rest.empty()) {
    std::vector<std::size_t> connected;
    for (std::size_t i = 0; i < rest.size(); ++i) {
      const auto& tp = query.patterns[rest[i]];
      for (std::size_t p : order) {
        if (tp.shares_variable(query.patterns[p])) {
          connected.push_back(i);
          break;
        }
      }
    }
    std::size_t pick = 0;
    if (!connected.empty()) pick = connected[std::uniform_int_distribution<std::size_t>(0, connected.size() - 1)(rng)];
    order.push_back(rest[pick]);
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return order;
}

Plan random_bushy(const Query& query, bool allow_cross_products, std::mt19937_64& rng) {
  const std::size_t n = query.size();
  if (n < 2) return Plan::leaf(0);
  struct Subtree {
    std::size_t node;
    std::vector<std::size_t> patterns;
  };
  std::vector<Subtree> forest;
  for (std::size_t i = 0; i < n; ++i) forest.push_back({i, {i}});
  auto connected = [&](const Subtree& a, const Subtree& b) {
    for (std::size_t x : a.patterns) {
      for (std::size_t y : b.patterns) {
        if (query.patterns[x].shares_variable(query.patterns[y])) return true;
      }
    }
    return false;
  };
  std::vector<Join> joins;
  while (forest.size() > 1) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs, linked;
    for (std::size_t a = 0; a < forest.size(); ++a) {
      for (std::size_t b = a + 1; b < forest.size(); ++b) {
        pairs.emplace_back(a, b);
        if (!allow_cross_products && connected(forest[a], forest[b])) linked.emplace_back(a, b);
      }
    }
    const auto& pool = linked.empty() ? pairs : linked;
    const auto [a, b] = pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
    joins.push_back({forest[a].node, forest[b].node});
    Subtree merged{n + joins.size() - 1, forest[a].patterns};
    merged.patterns.insert(merged.patterns.end(), forest[b].patterns.begin(), forest[b].patterns.end());
    forest.erase(forest.begin() + static_cast<std::ptrdiff_t>(b));
    forest[a] = std::move(merged);
  }
  std::vector<std::size_t> patterns(n);
  std::iota(patterns.begin(), patterns.end(), std::size_t{0});
  return Plan(std::move(patterns), std::move(joins));
}

Corpus build_corpus(const CorpusConfig& config) {
  if (config.plans_per_query == 0) throw DomainError("plans per query must be positive");
  if (!(config.bushy_fraction >= 0.0 && config.bushy_fraction <= 1.0)) {
    throw DomainError("bushy fraction must lie in [0, 1]");
  }
  GeneratedData data = generate_synthetic(config.generator);
  Corpus corpus{std::move(data.store), std::move(data.queries), {}};
  std::mt19937_64 rng(splitmix64(config.generator.seed ^ 0x706c616e73ULL));
  for (std::size_t qi = 0; qi < corpus.queries.size(); ++qi) {
    const Query& query = corpus.queries[qi];
    CardinalityOracle oracle(corpus.store, query, config.generator.row_cap);
    for (std::size_t k = 0; k < config.plans_per_query; ++k) {
      const bool bushy = std::uniform_real_distribution<double>(0.0, 1.0)(rng) < config.bushy_fraction;
      Plan plan = query.size() == 1 ? Plan::leaf(0)
                  : bushy           ? random_bushy(query, config.allow_cross_products, rng)
                                    : Plan::left_linear(random_order(query, config.allow_cross_products, rng));
      const double cost = c_out(oracle, plan).total;
      corpus.plans.push_back({qi, std::move(plan), cost});
    }
  }
  return corpus;
}

namespace {

std::string plan_file_name(const std::string& query_id, std::size_t k) {
  return "plans/" + query_id + "_" + std::to_string(k) + ".json";
}

}  // namespace

void write_corpus(const Corpus& corpus, const fs::path& dir, const std::string& config_json) {
  fs::create_directories(dir / "queries");
  fs::create_directories(dir / "plans");
  save_triples(dir / "store.tsv", corpus.store);

  nlohmann::ordered_json manifest;
  manifest["format_version"] = 1;
  manifest["store"] = "store.tsv";
  manifest["examples"] = "examples.csv";
  if (!config_json.empty()) manifest["generator"] = nlohmann::ordered_json::parse(config_json);
  auto queries = nlohmann::ordered_json::array();
  for (const Query& q : corpus.queries) {
    const std::string file = "queries/" + q.id + ".json";
    save_query(dir / file, q, corpus.store.dictionary());
    queries.push_back(file);
  }
  manifest["queries"] = std::move(queries);

  CsvTable examples({"query_id", "plan_file", "c_out"});
  std::map<std::size_t, std::size_t> per_query;
  for (const LabeledPlan& lp : corpus.plans) {
    const Query& q = corpus.queries.at(lp.query);
    const std::string file = plan_file_name(q.id, per_query[lp.query]++);
    save_plan(dir / file, q.id, lp.plan);
    examples.add_row({q.id, file, format_double(lp.c_out)});
  }
  examples.save(dir / "examples.csv");
  manifest["counts"] = {{"triples", corpus.store.size()},
                        {"queries", corpus.queries.size()},
                        {"examples", corpus.plans.size()}};
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

Corpus load_corpus(const fs::path& dir) {
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(read_file(dir / "manifest.json"));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed dataset manifest: ") + e.what());
  }
  Corpus corpus;
  try {
    corpus.store = load_triples(dir / manifest.at("store").get<std::string>());
    std::map<std::string, std::size_t> index;
    for (const auto& file : manifest.at("queries")) {
      Query q = load_query(dir / file.get<std::string>(), corpus.store.dictionary());
      index[q.id] = corpus.queries.size();
      corpus.queries.push_back(std::move(q));
    }
    const CsvTable examples = CsvTable::load(dir / manifest.at("examples").get<std::string>());
    const std::size_t qcol = examples.column("query_id");
    const std::size_t pcol = examples.column("plan_file");
    const std::size_t ccol = examples.column("c_out");
    for (const auto& row : examples.rows()) {
      const auto it = index.find(row[qcol]);
      if (it == index.end()) throw FormatError("example references unknown query '" + row[qcol] + "'");
      PlanDocument doc = load_plan(dir / row[pcol]);
      if (doc.plan.size() != corpus.queries[it->second].size()) {
        throw FormatError("plan " + row[pcol] + " does not cover query " + row[qcol]);
      }
      corpus.plans.push_back({it->second, std::move(doc.plan), std::stod(row[ccol])});
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed dataset manifest: ") + e.what());
  }
  return corpus;
}

std::vector<costmodel::TrainingExample> training_examples(const Corpus& corpus,
                                                          const costmodel::FeatureLayout& layout) {
  std::vector<tensor::Matrix> features;
  features.reserve(corpus.queries.size());
  for (const Query& q : corpus.queries) features.push_back(costmodel::build_features(q, corpus.store, layout));
  std::vector<costmodel::TrainingExample> out;
  out.reserve(corpus.plans.size());
  for (const LabeledPlan& lp : corpus.plans) {
    out.push_back({corpus.queries[lp.query].id, features[lp.query], encode(lp.plan), lp.c_out});
  }
  return out;
}

}  // namespace joinrelax::workbench
