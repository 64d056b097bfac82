#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "joinrelax/costmodel/train.hpp"
#include "joinrelax/relax/config.hpp"
#include "joinrelax/workbench/csv.hpp"
#include "joinrelax/workbench/dataset.hpp"

namespace joinrelax::workbench {

namespace fs = std::filesystem;

// Columns holding measured wall-clock time (or values fitted from it); every other CSV cell
// is a deterministic function of the run's configuration and seed.
bool is_measured_column(const std::string& name);
CsvTable blank_measured_columns(const CsvTable& table);

struct GenDataSpec {
  CorpusConfig corpus;
  fs::path out;
};

struct TrainSpec {
  fs::path dataset;
  costmodel::TrainConfig train;
  fs::path out;
};

struct QuerySelection {
  std::vector<QueryShape> shapes{QueryShape::kStar, QueryShape::kPath};
  std::vector<std::size_t> sizes{4, 6, 8};
  std::size_t queries_per_size = 20;
};

struct OptimizeSpec {
  fs::path dataset;
  fs::path model;
  relax::SearchConfig search;
  QuerySelection selection;
  std::vector<std::size_t> fronts{1, 5};  // one gradient-search method per entry
  bool dynamic_programming = true;
  std::size_t dp_cap = 10;
  bool exhaustive = false;
  fs::path out;
};

struct LandscapeSpec {
  fs::path dataset;
  fs::path model;
  std::optional<fs::path> plan1;  // both set: interpolate these two plans
  std::optional<fs::path> plan2;
  std::size_t points = 101;
  std::size_t pairs = 50;  // sampled pairs when no plan files are given
  std::size_t min_patterns = 3;
  relax::SearchConfig search;  // penalty weights for P_struct
  std::uint64_t seed = 1;
  fs::path out;
};

struct BenchSpec {
  fs::path dataset;
  fs::path model;
  std::vector<std::size_t> sizes{3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14};
  std::size_t repetitions = 3;
  QueryShape shape = QueryShape::kPath;
  std::size_t dp_cap = 12;
  relax::SearchConfig search = [] {
    relax::SearchConfig c;
    c.iterations = 500;
    return c;
  }();
  std::uint64_t seed = 1;
  fs::path out;
};

struct FrontSweepSpec {
  fs::path dataset;
  fs::path model;
  relax::SearchConfig search;
  QuerySelection selection{{QueryShape::kPath}, {8}, 20};
  std::vector<std::size_t> ks{1, 2, 4, 6, 8};
  fs::path out;
};

// Each command writes its outputs under spec.out with a provenance sidecar per output and
// returns the main CSV table.
Corpus cmd_gen_data(const GenDataSpec& spec);
costmodel::TrainResult cmd_train(const TrainSpec& spec);
CsvTable cmd_optimize(const OptimizeSpec& spec);
CsvTable cmd_landscape(const LandscapeSpec& spec);
CsvTable cmd_bench_runtime(const BenchSpec& spec);
CsvTable cmd_front_sweep(const FrontSweepSpec& spec);

// Queries of the corpus matching the selection, in corpus order, at most
// queries_per_size per (shape, size).
std::vector<std::size_t> select_queries(const Corpus& corpus, const QuerySelection& selection);

// JSON echoes used in provenance records.
std::string to_json(const CorpusConfig& config);
std::string to_json(const costmodel::TrainConfig& config);

}  // namespace joinrelax::workbench
