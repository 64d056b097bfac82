#include <CLI11.hpp>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "joinrelax/workbench/commands.hpp"
#include "joinrelax/workbench/run_config.hpp"

using namespace joinrelax;
using namespace joinrelax::workbench;

namespace {

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
  std::optional<std::string> profile;
};

std::vector<QueryShape> parse_shapes(const std::vector<std::string>& names) {
  std::vector<QueryShape> out;
  for (const auto& n : names) out.push_back(parse_shape(n));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gradient-based join ordering workbench"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Seed for the command's random streams");
  app.add_option("--out", g.out, "Output directory")->capture_default_str();
  app.add_option("--profile", g.profile, "Search profile: defaults, LUBM-Star, LUBM-Path, Wikidata-Star, Wikidata-Path");

  auto run_config = [&] { return g.config.empty() ? RunConfig{} : RunConfig::load(g.config); };

  // gen-data
  auto* gen = app.add_subcommand("gen-data", "Generate a store, queries and labelled random plans");
  std::optional<std::size_t> gen_queries, gen_plans, gen_min, gen_max;
  std::vector<std::string> gen_shapes;
  std::optional<double> gen_bushy;
  bool gen_cross = false;
  gen->add_option("--queries-per-size", gen_queries);
  gen->add_option("--plans-per-query", gen_plans);
  gen->add_option("--min-patterns", gen_min);
  gen->add_option("--max-patterns", gen_max);
  gen->add_option("--shapes", gen_shapes, "star and/or path");
  gen->add_option("--bushy-fraction", gen_bushy, "Share of sampled plans that are bushy trees");
  gen->add_flag("--allow-cross-products", gen_cross, "Sample join orders uniformly, cross products included");
  gen->callback([&] {
    GenDataSpec spec;
    spec.corpus.generator = default_generator(1);
    spec.corpus.generator.queries_per_size = 50;
    run_config().apply(spec);
    if (gen_queries) spec.corpus.generator.queries_per_size = *gen_queries;
    if (gen_plans) spec.corpus.plans_per_query = *gen_plans;
    if (gen_min) spec.corpus.generator.min_patterns = *gen_min;
    if (gen_max) spec.corpus.generator.max_patterns = *gen_max;
    if (!gen_shapes.empty()) spec.corpus.generator.shapes = parse_shapes(gen_shapes);
    if (gen_bushy) spec.corpus.bushy_fraction = *gen_bushy;
    if (gen_cross) spec.corpus.allow_cross_products = true;
    if (g.seed) spec.corpus.generator.seed = *g.seed;
    spec.out = g.out;
    const Corpus corpus = cmd_gen_data(spec);
    std::cout << "wrote " << corpus.queries.size() << " queries and " << corpus.plans.size() << " labelled plans to "
              << spec.out << "\n";
  });

  // train
  auto* train = app.add_subcommand("train", "Train the cost model on a generated dataset");
  std::string train_dataset;
  std::optional<std::size_t> train_epochs, train_batch;
  std::optional<double> train_lr;
  train->add_option("--dataset", train_dataset, "Dataset directory from gen-data");
  train->add_option("--epochs", train_epochs);
  train->add_option("--batch-size", train_batch);
  train->add_option("--learning-rate", train_lr);
  train->callback([&] {
    TrainSpec spec;
    run_config().apply(spec);
    if (!train_dataset.empty()) spec.dataset = train_dataset;
    if (train_epochs) spec.train.epochs = *train_epochs;
    if (train_batch) spec.train.batch_size = *train_batch;
    if (train_lr) spec.train.learning_rate = *train_lr;
    if (g.seed) spec.train.seed = *g.seed;
    spec.out = g.out;
    const auto result = cmd_train(spec);
    std::cout << "selected epoch " << result.report.best_epoch << " with validation median q-error "
              << result.report.best_validation_median_q_error << "\n";
  });

  // optimize
  auto* opt = app.add_subcommand("optimize", "Compare greedy, DP and gradient search under one model");
  std::string opt_dataset, opt_model;
  std::vector<std::size_t> opt_sizes, opt_fronts;
  std::vector<std::string> opt_shapes;
  std::optional<std::size_t> opt_queries;
  bool opt_no_dp = false, opt_exhaustive = false;
  opt->add_option("--dataset", opt_dataset);
  opt->add_option("--model", opt_model);
  opt->add_option("--sizes", opt_sizes);
  opt->add_option("--shapes", opt_shapes);
  opt->add_option("--queries-per-size", opt_queries);
  opt->add_option("--fronts", opt_fronts, "Gradient-search front counts, one method each");
  opt->add_flag("--no-dp", opt_no_dp);
  opt->add_flag("--exhaustive", opt_exhaustive);
  opt->callback([&] {
    const RunConfig rc = run_config();
    OptimizeSpec spec;
    spec.search = rc.search(g.profile);
    rc.apply(spec);
    if (!opt_dataset.empty()) spec.dataset = opt_dataset;
    if (!opt_model.empty()) spec.model = opt_model;
    if (!opt_sizes.empty()) spec.selection.sizes = opt_sizes;
    if (!opt_shapes.empty()) spec.selection.shapes = parse_shapes(opt_shapes);
    if (opt_queries) spec.selection.queries_per_size = *opt_queries;
    if (!opt_fronts.empty()) spec.fronts = opt_fronts;
    if (opt_no_dp) spec.dynamic_programming = false;
    if (opt_exhaustive) spec.exhaustive = true;
    if (g.seed) spec.search.seed = *g.seed;
    spec.out = g.out;
    const CsvTable table = cmd_optimize(spec);
    std::cout << "wrote " << table.rows().size() << " rows to " << spec.out / "optimize.csv" << "\n";
  });

  // landscape
  auto* land = app.add_subcommand("landscape", "Interpolate the model between two plans");
  std::string land_dataset, land_model, land_p1, land_p2;
  std::optional<std::size_t> land_points, land_pairs;
  land->add_option("--dataset", land_dataset);
  land->add_option("--model", land_model);
  land->add_option("--plan1", land_p1);
  land->add_option("--plan2", land_p2);
  land->add_option("--points", land_points);
  land->add_option("--pairs", land_pairs);
  land->callback([&] {
    const RunConfig rc = run_config();
    LandscapeSpec spec;
    spec.search = rc.search(g.profile);
    rc.apply(spec);
    if (!land_dataset.empty()) spec.dataset = land_dataset;
    if (!land_model.empty()) spec.model = land_model;
    if (!land_p1.empty()) spec.plan1 = land_p1;
    if (!land_p2.empty()) spec.plan2 = land_p2;
    if (land_points) spec.points = *land_points;
    if (land_pairs) spec.pairs = *land_pairs;
    if (g.seed) spec.seed = *g.seed;
    spec.out = g.out;
    const CsvTable table = cmd_landscape(spec);
    std::cout << "wrote " << table.rows().size() << " rows to " << spec.out / "landscape.csv" << "\n";
  });

  // bench-runtime
  auto* bench = app.add_subcommand("bench-runtime", "Measure search runtime against query size");
  std::string bench_dataset, bench_model, bench_shape;
  std::vector<std::size_t> bench_sizes;
  std::optional<std::size_t> bench_reps, bench_dp_cap, bench_iterations;
  bench->add_option("--dataset", bench_dataset);
  bench->add_option("--model", bench_model);
  bench->add_option("--sizes", bench_sizes);
  bench->add_option("--repetitions", bench_reps);
  bench->add_option("--shape", bench_shape);
  bench->add_option("--dp-cap", bench_dp_cap);
  bench->add_option("--iterations", bench_iterations);
  bench->callback([&] {
    const RunConfig rc = run_config();
    BenchSpec spec;
    spec.search = rc.search(g.profile);
    spec.search.iterations = 500;
    rc.apply(spec);
    if (!bench_dataset.empty()) spec.dataset = bench_dataset;
    if (!bench_model.empty()) spec.model = bench_model;
    if (!bench_sizes.empty()) spec.sizes = bench_sizes;
    if (bench_reps) spec.repetitions = *bench_reps;
    if (!bench_shape.empty()) spec.shape = parse_shape(bench_shape);
    if (bench_dp_cap) spec.dp_cap = *bench_dp_cap;
    if (bench_iterations) spec.search.iterations = *bench_iterations;
    if (g.seed) spec.seed = *g.seed;
    spec.out = g.out;
    const CsvTable table = cmd_bench_runtime(spec);
    std::cout << "wrote " << table.rows().size() << " rows to " << spec.out / "runtime.csv" << "\n";
  });

  // front-sweep
  auto* sweep = app.add_subcommand("front-sweep", "Median predicted cost against the number of search fronts");
  std::string sweep_dataset, sweep_model;
  std::vector<std::size_t> sweep_ks, sweep_sizes;
  std::vector<std::string> sweep_shapes;
  std::optional<std::size_t> sweep_queries;
  sweep->add_option("--dataset", sweep_dataset);
  sweep->add_option("--model", sweep_model);
  sweep->add_option("--ks", sweep_ks);
  sweep->add_option("--sizes", sweep_sizes);
  sweep->add_option("--shapes", sweep_shapes);
  sweep->add_option("--queries-per-size", sweep_queries);
  sweep->callback([&] {
    const RunConfig rc = run_config();
    FrontSweepSpec spec;
    spec.search = rc.search(g.profile);
    rc.apply(spec);
    if (!sweep_dataset.empty()) spec.dataset = sweep_dataset;
    if (!sweep_model.empty()) spec.model = sweep_model;
    if (!sweep_ks.empty()) spec.ks = sweep_ks;
    if (!sweep_sizes.empty()) spec.selection.sizes = sweep_sizes;
    if (!sweep_shapes.empty()) spec.selection.shapes = parse_shapes(sweep_shapes);
    if (sweep_queries) spec.selection.queries_per_size = *sweep_queries;
    if (g.seed) spec.search.seed = *g.seed;
    spec.out = g.out;
    const CsvTable table = cmd_front_sweep(spec);
    std::cout << table.to_string();
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
