#include "joinrelax/workbench/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <json.hpp>
#include <map>
#include <set>

#include "joinrelax/costmodel/io.hpp"
#include "joinrelax/discrete/search.hpp"
#include "joinrelax/error.hpp"
#include "joinrelax/plan/io.hpp"
#include "joinrelax/plan/matrix.hpp"
#include "joinrelax/random.hpp"
#include "joinrelax/relax/penalties.hpp"
#include "joinrelax/relax/search.hpp"
#include "joinrelax/storage/io.hpp"
#include "joinrelax/workbench/analysis.hpp"
#include "joinrelax/workbench/provenance.hpp"

namespace joinrelax::workbench {

namespace {

constexpr const char* kTimingNote =
    "wall-clock measured around each search call only; single process, sequential, no CPU pinning";

std::string str(std::size_t v) { return std::to_string(v); }

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

fs::path prepare(const fs::path& out) {
  if (out.empty()) throw DomainError("an output directory is required");
  fs::create_directories(out);
  return out;
}

}  // namespace

bool is_measured_column(const std::string& name) {
  static const std::set<std::string> measured{"wall_clock_ms", "median_wall_clock_ms", "fit_intercept", "fit_slope",
                                              "fit_r_squared"};
  return measured.count(name) > 0;
}

CsvTable blank_measured_columns(const CsvTable& table) {
  CsvTable out(table.header());
  for (auto row : table.rows()) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (is_measured_column(table.header()[i])) row[i].clear();
    }
    out.add_row(std::move(row));
  }
  return out;
}

std::string to_json(const CorpusConfig& corpus) {
  const GenConfig& g = corpus.generator;
  nlohmann::ordered_json doc;
  doc["entities"] = g.entities;
  doc["predicates"] = g.predicates;
  doc["triples"] = g.triples;
  doc["predicate_skew"] = g.predicate_skew;
  doc["subject_skew"] = g.subject_skew;
  doc["object_skew"] = g.object_skew;
  doc["max_fanout"] = g.max_fanout;
  auto shapes = nlohmann::ordered_json::array();
  for (QueryShape s : g.shapes) shapes.push_back(std::string(to_string(s)));
  doc["shapes"] = shapes;
  doc["min_patterns"] = g.min_patterns;
  doc["max_patterns"] = g.max_patterns;
  doc["queries_per_size"] = g.queries_per_size;
  doc["constant_object_probability"] = g.constant_object_probability;
  doc["max_retries"] = g.max_retries;
  doc["row_cap"] = g.row_cap;
  doc["seed"] = g.seed;
  doc["plans_per_query"] = corpus.plans_per_query;
  doc["bushy_fraction"] = corpus.bushy_fraction;
  doc["allow_cross_products"] = corpus.allow_cross_products;
  return doc.dump();
}

std::string to_json(const costmodel::TrainConfig& c) {
  nlohmann::ordered_json doc;
  doc["epochs"] = c.epochs;
  doc["batch_size"] = c.batch_size;
  doc["learning_rate"] = c.learning_rate;
  doc["dropout"] = c.dropout;
  doc["hidden"] = c.hidden;
  doc["seed"] = c.seed;
  doc["validation_fraction"] = c.validation_fraction;
  doc["log_target"] = c.log_target;
  doc["embedding_dim"] = c.layout.embedding_dim;
  doc["embedding_seed"] = c.layout.embedding_seed;
  return doc.dump();
}

namespace {

std::string merge_json(std::initializer_list<std::pair<const char*, std::string>> parts) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (const auto& [key, text] : parts) {
    try {
      doc[key] = nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::exception&) {
      doc[key] = text;
    }
  }
  return doc.dump();
}

std::string shapes_json(const QuerySelection& s) {
  nlohmann::ordered_json doc;
  auto shapes = nlohmann::ordered_json::array();
  for (QueryShape shape : s.shapes) shapes.push_back(std::string(to_string(shape)));
  doc["shapes"] = shapes;
  doc["sizes"] = s.sizes;
  doc["queries_per_size"] = s.queries_per_size;
  return doc.dump();
}

std::vector<fs::path> dataset_inputs(const fs::path& dataset) {
  return {dataset / "manifest.json", dataset / "examples.csv", dataset / "store.tsv"};
}

}  // namespace

Corpus cmd_gen_data(const GenDataSpec& spec) {
  const fs::path out = prepare(spec.out);
  Corpus corpus = build_corpus(spec.corpus);
  const std::string config = to_json(spec.corpus);
  write_corpus(corpus, out, config);
  write_provenance({"gen-data", spec.corpus.generator.seed, config, {}, {out / "examples.csv", out / "manifest.json"}, {}});
  return corpus;
}

costmodel::TrainResult cmd_train(const TrainSpec& spec) {
  const fs::path out = prepare(spec.out);
  const Corpus corpus = load_corpus(spec.dataset);
  const auto examples = training_examples(corpus, spec.train.layout);
  costmodel::TrainResult result = costmodel::train(examples, spec.train);
  costmodel::save_model(out / "model.json", result.params);

  CsvTable metrics({"epoch", "train_mse", "validation_median_q_error", "selected"});
  for (const auto& m : result.report.epochs) {
    metrics.add_row({str(m.epoch), format_double(m.train_mse), format_double(m.validation_median_q_error),
                     m.epoch == result.report.best_epoch ? "1" : "0"});
  }
  metrics.save(out / "train_metrics.csv");
  write_provenance({"train", spec.train.seed, to_json(spec.train), dataset_inputs(spec.dataset),
                    {out / "model.json", out / "train_metrics.csv"}, {}});
  return result;
}

std::vector<std::size_t> select_queries(const Corpus& corpus, const QuerySelection& selection) {
  std::map<std::pair<QueryShape, std::size_t>, std::size_t> taken;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < corpus.queries.size(); ++i) {
    const Query& q = corpus.queries[i];
    if (std::find(selection.shapes.begin(), selection.shapes.end(), q.shape) == selection.shapes.end()) continue;
    if (std::find(selection.sizes.begin(), selection.sizes.end(), q.size()) == selection.sizes.end()) continue;
    auto& count = taken[{q.shape, q.size()}];
    if (count >= selection.queries_per_size) continue;
    ++count;
    out.push_back(i);
  }
  return out;
}

namespace {

struct MethodOutcome {
  std::optional<Plan> plan;
  double predicted = 0.0;
  std::size_t evaluations = 0;
  double wall_clock_ms = 0.0;
  std::string error;
};

}  // namespace

CsvTable cmd_optimize(const OptimizeSpec& spec) {
  const fs::path out = prepare(spec.out);
  spec.search.validate();
  const Corpus corpus = load_corpus(spec.dataset);
  const costmodel::ModelParams model = costmodel::load_model(spec.model);

  CsvTable table({"query_id", "shape", "n", "method", "predicted_cost", "true_c_out", "evaluations", "wall_clock_ms",
                  "valid", "plan", "error"});
  for (std::size_t qi : select_queries(corpus, spec.selection)) {
    const Query& query = corpus.queries[qi];
    const std::size_t n = query.size();
    const tensor::Matrix x = costmodel::build_features(query, corpus.store, model.layout);
    discrete::LearnedCost learned(model, costmodel::pattern_features(query, corpus.store, model.layout));
    CardinalityOracle oracle(corpus.store, query);

    std::vector<std::pair<std::string, MethodOutcome>> outcomes;
    auto run_discrete = [&](const std::string& name, auto&& search) {
      MethodOutcome o;
      try {
        const discrete::DiscreteResult r = search();
        o.plan = r.plan;
        o.predicted = r.cost;
        o.evaluations = r.evaluations;
        o.wall_clock_ms = r.wall_clock_ms;
      } catch (const std::exception& e) {
        o.error = e.what();
      }
      outcomes.emplace_back(name, std::move(o));
    };
    run_discrete("greedy", [&] { return discrete::greedy(n, learned); });
    if (spec.dynamic_programming) run_discrete("dp", [&] { return discrete::dp_left_linear(n, learned, spec.dp_cap); });
    if (spec.exhaustive) run_discrete("exhaustive", [&] { return discrete::exhaustive(n, learned); });
    for (std::size_t k : spec.fronts) {
      MethodOutcome o;
      try {
        relax::SearchConfig config = spec.search;
        config.fronts = k;
        const auto r = relax::optimize_multi(model, x, config);
        o.plan = r.best().plan;
        o.predicted = r.best().plan_cost;
        o.evaluations = config.iterations * k;
        o.wall_clock_ms = r.wall_clock_ms;
      } catch (const std::exception& e) {
        o.error = e.what();
      }
      outcomes.emplace_back("gradient_k" + str(k), std::move(o));
    }

    for (auto& [method, o] : outcomes) {
      std::vector<std::string> row{query.id, std::string(to_string(query.shape)), str(n), method};
      if (!o.plan) {
        row.insert(row.end(), {"", "", "", "", "", "", o.error});
        table.add_row(std::move(row));
        continue;
      }
      std::string valid = "1";
      std::string true_cost;
      try {
        decode(encode(*o.plan));
        true_cost = format_double(c_out(oracle, *o.plan).total);
      } catch (const PlanDecodeError& e) {
        valid = "0";
        o.error = e.what();
      } catch (const std::exception& e) {
        o.error = e.what();
      }
      row.insert(row.end(), {format_double(o.predicted), true_cost, str(o.evaluations), format_double(o.wall_clock_ms),
                             valid, to_string(*o.plan), o.error});
      table.add_row(std::move(row));
    }
  }
  table.save(out / "optimize.csv");
  std::vector<fs::path> inputs = dataset_inputs(spec.dataset);
  inputs.push_back(spec.model);
  write_provenance({"optimize", spec.search.seed,
                    merge_json({{"search", relax::config_to_json(spec.search)},
                                {"selection", shapes_json(spec.selection)},
                                {"fronts", nlohmann::json(spec.fronts).dump()},
                                {"dynamic_programming", spec.dynamic_programming ? "true" : "false"},
                                {"dp_cap", str(spec.dp_cap)},
                                {"exhaustive", spec.exhaustive ? "true" : "false"}}),
                    inputs, {out / "optimize.csv"}, kTimingNote});
  return table;
}

namespace {

struct PlanPair {
  std::size_t query = 0;
  Plan p1 = Plan::leaf(0);
  Plan p2 = Plan::leaf(0);
};

// Directional derivative of the model output along P2 - P1 at A(alpha).
double directional_derivative(const costmodel::ModelParams& model, const tensor::Matrix& x, const tensor::Matrix& p1,
                              const tensor::Matrix& p2, double alpha) {
  tensor::Tape tape;
  const auto bound = costmodel::bind(tape, model, false);
  const tensor::Var a = tape.leaf(interpolate(p1, p2, alpha));
  const tensor::Var out = costmodel::forward(model, bound, tape.constant(x), a);
  tape.backward(out);
  return tape.grad(a).cwiseProduct(p2 - p1).sum();
}

double penalty_value(const tensor::Matrix& a, std::size_t n, const relax::PenaltyWeights& w) {
  tensor::Tape tape;
  const tensor::Var v = tape.constant(a);
  return relax::structural_penalty(relax::all_penalties(v, n), w).scalar();
}

}  // namespace

CsvTable cmd_landscape(const LandscapeSpec& spec) {
  const fs::path out = prepare(spec.out);
  if (spec.points < 2) throw DomainError("a landscape needs at least two grid points");
  const Corpus corpus = load_corpus(spec.dataset);
  const costmodel::ModelParams model = costmodel::load_model(spec.model);

  std::vector<PlanPair> pairs;
  if (spec.plan1 || spec.plan2) {
    if (!spec.plan1 || !spec.plan2) throw DomainError("landscape needs both plan files or neither");
    PlanDocument d1 = load_plan(*spec.plan1);
    PlanDocument d2 = load_plan(*spec.plan2);
    if (d1.plan.node_count() != d2.plan.node_count()) {
      throw StructuralError("plans have different dimensions: " + str(d1.plan.node_count()) + " and " +
                            str(d2.plan.node_count()));
    }
    std::optional<std::size_t> query;
    for (std::size_t i = 0; i < corpus.queries.size(); ++i) {
      if (corpus.queries[i].id == d1.query_id) query = i;
    }
    if (!query) throw DomainError("plan file references unknown query '" + d1.query_id + "'");
    if (corpus.queries[*query].size() != d1.plan.size()) {
      throw StructuralError("plan size does not match query " + d1.query_id);
    }
    pairs.push_back({*query, std::move(d1.plan), std::move(d2.plan)});
  } else {
    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < corpus.queries.size(); ++i) {
      if (corpus.queries[i].size() >= std::max<std::size_t>(spec.min_patterns, 3)) eligible.push_back(i);
    }
    if (eligible.empty()) throw DomainError("no query has enough patterns for a landscape");
    std::mt19937_64 rng(spec.seed);
    while (pairs.size() < spec.pairs) {
      const std::size_t qi = eligible[std::uniform_int_distribution<std::size_t>(0, eligible.size() - 1)(rng)];
      const Query& q = corpus.queries[qi];
      Plan p1 = Plan::left_linear(random_order(q, false, rng));
      Plan p2 = Plan::left_linear(random_order(q, false, rng));
      if (encode(p1) == encode(p2)) continue;
      pairs.push_back({qi, std::move(p1), std::move(p2)});
    }
  }

  const relax::PenaltyWeights weights = spec.search.effective_weights();
  CsvTable curve({"pair", "query_id", "alpha", "predicted_cost", "model_output", "p_struct"});
  CsvTable summary({"pair", "query_id", "n", "cost_p1", "cost_p2", "slope_at_half", "toward_cheaper"});
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const Query& q = corpus.queries[pairs[k].query];
    const tensor::Matrix x = costmodel::build_features(q, corpus.store, model.layout);
    const tensor::Matrix m1 = encode(pairs[k].p1);
    const tensor::Matrix m2 = encode(pairs[k].p2);
    for (std::size_t i = 0; i < spec.points; ++i) {
      const double alpha = static_cast<double>(i) / static_cast<double>(spec.points - 1);
      const tensor::Matrix a = interpolate(m1, m2, alpha);
      const double output = costmodel::forward_value(model, x, a);
      curve.add_row({str(k), q.id, format_double(alpha), format_double(costmodel::to_cost(model, output)),
                     format_double(output), format_double(penalty_value(a, q.size(), weights))});
    }
    const double c1 = costmodel::forward_value(model, x, m1);
    const double c2 = costmodel::forward_value(model, x, m2);
    const double slope = directional_derivative(model, x, m1, m2, 0.5);
    const bool toward = c1 == c2 ? false : (c1 < c2 ? slope > 0.0 : slope < 0.0);
    summary.add_row({str(k), q.id, str(q.size()), format_double(costmodel::to_cost(model, c1)),
                     format_double(costmodel::to_cost(model, c2)), format_double(slope), toward ? "1" : "0"});
  }
  curve.save(out / "landscape.csv");
  summary.save(out / "landscape_pairs.csv");
  std::vector<fs::path> inputs = dataset_inputs(spec.dataset);
  inputs.push_back(spec.model);
  if (spec.plan1) inputs.push_back(*spec.plan1);
  if (spec.plan2) inputs.push_back(*spec.plan2);
  nlohmann::ordered_json echo;
  echo["points"] = spec.points;
  echo["pairs"] = pairs.size();
  echo["min_patterns"] = spec.min_patterns;
  echo["seed"] = spec.seed;
  echo["search"] = nlohmann::ordered_json::parse(relax::config_to_json(spec.search));
  write_provenance({"landscape", spec.seed, echo.dump(), inputs, {out / "landscape.csv", out / "landscape_pairs.csv"}, {}});
  return curve;
}

CsvTable cmd_bench_runtime(const BenchSpec& spec) {
  const fs::path out = prepare(spec.out);
  spec.search.validate();
  if (spec.repetitions == 0) throw DomainError("repetitions must be positive");
  const Corpus corpus = load_corpus(spec.dataset);
  const costmodel::ModelParams model = costmodel::load_model(spec.model);

  GenConfig gen;
  gen.row_cap = 0;  // only features are needed
  gen.seed = spec.seed;
  std::mt19937_64 rng(splitmix64(spec.seed ^ 0x62656e6368ULL));

  struct Samples {
    std::vector<double> ms;
    std::size_t evaluations = 0;
    bool over_budget = false;
  };
  const std::vector<std::string> methods{"gradient", "greedy", "dp"};
  std::map<std::pair<std::string, std::size_t>, Samples> samples;

  relax::SearchConfig search = spec.search;
  search.fronts = 1;
  search.threads = 1;
  for (std::size_t n : spec.sizes) {
    if (n < 2) throw DomainError("runtime sizes must be >= 2");
    for (std::size_t r = 0; r < spec.repetitions; ++r) {
      Query q = generate_query(corpus.store, spec.shape, n, gen, rng);
      const tensor::Matrix x = costmodel::build_features(q, corpus.store, model.layout);
      discrete::LearnedCost learned(model, costmodel::pattern_features(q, corpus.store, model.layout));

      search.seed = front_seed(spec.seed, r);
      const auto start = std::chrono::steady_clock::now();
      relax::optimize(model, x, search);
      auto& g = samples[{"gradient", n}];
      g.ms.push_back(elapsed_ms(start));
      g.evaluations = search.iterations;

      const auto greedy = discrete::greedy(n, learned);
      auto& gr = samples[{"greedy", n}];
      gr.ms.push_back(greedy.wall_clock_ms);
      gr.evaluations = greedy.evaluations;

      auto& dp = samples[{"dp", n}];
      if (n > spec.dp_cap) {
        dp.over_budget = true;
      } else {
        const auto result = discrete::dp_left_linear(n, learned, spec.dp_cap);
        dp.ms.push_back(result.wall_clock_ms);
        dp.evaluations = result.evaluations;
      }
    }
  }

  CsvTable table({"n", "method", "repetitions", "median_wall_clock_ms", "evaluations"});
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> series;
  for (const auto& method : methods) {
    for (std::size_t n : spec.sizes) {
      const Samples& s = samples[{method, n}];
      if (s.over_budget || s.ms.empty()) {
        table.add_row({str(n), method, "0", "", ""});
        continue;
      }
      const double med = median(s.ms);
      table.add_row({str(n), method, str(s.ms.size()), format_double(med), str(s.evaluations)});
      if (n >= 4) {
        series[method].first.push_back(static_cast<double>(n));
        series[method].second.push_back(med);
      }
    }
  }
  table.save(out / "runtime.csv");

  CsvTable fits({"method", "model", "n_min", "n_max", "fit_intercept", "fit_slope", "fit_r_squared"});
  for (const auto& method : methods) {
    const auto& [ns, ms] = series[method];
    if (ns.size() < 2) continue;
    const bool exponential = method == "dp";
    const LinearFit fit = exponential ? fit_exponential(ns, ms) : fit_power_law(ns, ms);
    fits.add_row({method, exponential ? "log_linear" : "power_law", format_double(ns.front()), format_double(ns.back()),
                  format_double(fit.intercept), format_double(fit.slope), format_double(fit.r_squared)});
  }
  fits.save(out / "runtime_fit.csv");

  nlohmann::ordered_json echo;
  echo["sizes"] = spec.sizes;
  echo["repetitions"] = spec.repetitions;
  echo["shape"] = std::string(to_string(spec.shape));
  echo["dp_cap"] = spec.dp_cap;
  echo["seed"] = spec.seed;
  echo["search"] = nlohmann::ordered_json::parse(relax::config_to_json(search));
  std::vector<fs::path> inputs = dataset_inputs(spec.dataset);
  inputs.push_back(spec.model);
  write_provenance({"bench-runtime", spec.seed, echo.dump(), inputs, {out / "runtime.csv", out / "runtime_fit.csv"},
                    kTimingNote});
  return table;
}

CsvTable cmd_front_sweep(const FrontSweepSpec& spec) {
  const fs::path out = prepare(spec.out);
  spec.search.validate();
  if (spec.ks.empty()) throw DomainError("front sweep needs at least one k");
  for (std::size_t k : spec.ks) {
    if (k == 0) throw DomainError("front counts must be positive");
  }
  const Corpus corpus = load_corpus(spec.dataset);
  const costmodel::ModelParams model = costmodel::load_model(spec.model);
  const std::size_t k_max = *std::max_element(spec.ks.begin(), spec.ks.end());

  CsvTable per_query({"query_id", "n", "k", "predicted_cost"});
  std::map<std::size_t, std::vector<double>> by_k;
  for (std::size_t qi : select_queries(corpus, spec.selection)) {
    const Query& q = corpus.queries[qi];
    const tensor::Matrix x = costmodel::build_features(q, corpus.store, model.layout);
    relax::SearchConfig config = spec.search;
    config.fronts = k_max;
    const auto result = relax::optimize_multi(model, x, config);
    for (std::size_t k : spec.ks) {
      double best = result.fronts[0].plan_output;
      for (std::size_t i = 1; i < k; ++i) best = std::min(best, result.fronts[i].plan_output);
      const double cost = costmodel::to_cost(model, best);
      by_k[k].push_back(cost);
      per_query.add_row({q.id, str(q.size()), str(k), format_double(cost)});
    }
  }
  if (by_k.empty()) throw DomainError("front sweep selected no queries");

  CsvTable table({"k", "queries", "median_predicted_cost"});
  for (std::size_t k : spec.ks) {
    table.add_row({str(k), str(by_k[k].size()), format_double(median(by_k[k]))});
  }
  table.save(out / "front_sweep.csv");
  per_query.save(out / "front_sweep_queries.csv");
  nlohmann::ordered_json echo;
  echo["ks"] = spec.ks;
  echo["selection"] = nlohmann::ordered_json::parse(shapes_json(spec.selection));
  echo["search"] = nlohmann::ordered_json::parse(relax::config_to_json(spec.search));
  std::vector<fs::path> inputs = dataset_inputs(spec.dataset);
  inputs.push_back(spec.model);
  write_provenance({"front-sweep", spec.search.seed, echo.dump(), inputs,
                    {out / "front_sweep.csv", out / "front_sweep_queries.csv"}, {}});
  return table;
}

}  // namespace joinrelax::workbench
