#pragma once

#include <cstddef>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "joinrelax/costmodel/train.hpp"
#include "joinrelax/plan/plan.hpp"
#include "joinrelax/storage/generator.hpp"

namespace joinrelax::workbench {

struct CorpusConfig {
  GenConfig generator;
  std::size_t plans_per_query = 3;  // random plans, repeats allowed
  // Probability that a sampled plan is a random bushy tree rather than a left-linear order.
  double bushy_fraction = 0.5;
  // false: each join combines inputs sharing a variable when such a pair exists.
  bool allow_cross_products = false;
};

struct LabeledPlan {
  std::size_t query = 0;  // index into Corpus::queries
  Plan plan = Plan::leaf(0);
  double c_out = 0.0;
};

struct Corpus {
  TripleStore store;
  std::vector<Query> queries;
  std::vector<LabeledPlan> plans;
};

// Random join order; see CorpusConfig::allow_cross_products.
std::vector<std::size_t> random_order(const Query& query, bool allow_cross_products, std::mt19937_64& rng);
// Random bushy tree built by merging two random subtrees until one remains.
Plan random_bushy(const Query& query, bool allow_cross_products, std::mt19937_64& rng);

// Store, queries and randomly ordered plans labelled with their exact C_out.
Corpus build_corpus(const CorpusConfig& config);

// Directory layout: manifest.json, store.tsv, queries/<id>.json, plans/<id>_<k>.json,
// examples.csv (query_id, plan_file, c_out).
// `config_json`, when given, is echoed into the manifest.
void write_corpus(const Corpus& corpus, const std::filesystem::path& dir, const std::string& config_json = {});
Corpus load_corpus(const std::filesystem::path& dir);

std::vector<costmodel::TrainingExample> training_examples(const Corpus& corpus,
                                                          const costmodel::FeatureLayout& layout);

// Generator config used by the workbench defaults: stars and paths, n = 2..8.
GenConfig default_generator(std::uint64_t seed);

}  // namespace joinrelax::workbench
