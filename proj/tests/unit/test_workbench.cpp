#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <json.hpp>
#include <random>

#include "joinrelax/error.hpp"
#include "joinrelax/plan/matrix.hpp"
#include "joinrelax/storage/cardinality.hpp"
#include "joinrelax/storage/io.hpp"
#include "joinrelax/workbench/analysis.hpp"
#include "joinrelax/workbench/commands.hpp"
#include "joinrelax/workbench/csv.hpp"
#include "joinrelax/workbench/dataset.hpp"
#include "joinrelax/workbench/provenance.hpp"
#include "joinrelax/workbench/run_config.hpp"

using namespace joinrelax;
using namespace joinrelax::workbench;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("joinrelax_unit_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

CorpusConfig tiny_corpus(std::uint64_t seed) {
  CorpusConfig c;
  c.generator = default_generator(seed);
  c.generator.entities = 200;
  c.generator.triples = 1200;
  c.generator.min_patterns = 2;
  c.generator.max_patterns = 4;
  c.generator.queries_per_size = 2;
  c.plans_per_query = 3;
  return c;
}

// Some pattern in `a` shares a variable with some pattern in `b`.
bool connected(const Query& q, std::uint64_t a, std::uint64_t b) {
  for (std::size_t i = 0; i < q.patterns.size(); ++i) {
    if (!(a >> i & 1)) continue;
    for (std::size_t j = 0; j < q.patterns.size(); ++j) {
      if (!(b >> j & 1)) continue;
      if (q.patterns[i].shares_variable(q.patterns[j])) return true;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("format_double round-trips and spells out non-finite values") {
  for (double v : {0.0, 1.0, -2.5, 0.1, 1.0 / 3.0, 1e300, 6.02214076e23, -1e-12}) {
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("csv tables quote and parse") {
  CsvTable t({"a", "b", "c"});
  t.add_row({"1", "x,y", "say \"hi\""});
  t.add_row({"", "line\nbreak", "plain"});
  const CsvTable back = CsvTable::parse(t.to_string());
  CHECK(back.header() == t.header());
  CHECK(back.rows() == t.rows());
  CHECK(back.column("c") == 2);
  CHECK_THROWS(back.column("missing"));
  CHECK_THROWS(t.add_row({"1", "2"}));

  const fs::path dir = scratch("csv");
  t.save(dir / "t.csv");
  CHECK(CsvTable::load(dir / "t.csv").rows() == t.rows());
  CHECK_THROWS_AS(CsvTable::parse("a,b\n1,2,3\n"), FormatError);
}

TEST_CASE("median") {
  CHECK(median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(median({4.0, 1.0, 3.0, 2.0}) == 2.5);
  CHECK(median({7.0}) == 7.0);
}

TEST_CASE("line and power-law fits recover synthetic parameters") {
  std::vector<double> x, y, yp, ye;
  for (double v = 2.0; v <= 14.0; v += 1.0) {
    x.push_back(v);
    y.push_back(3.0 - 0.5 * v);
    yp.push_back(2.5 * std::pow(v, 1.3));
    ye.push_back(std::exp(0.2 + 0.7 * v));
  }
  const LinearFit l = fit_line(x, y);
  CHECK(l.intercept == doctest::Approx(3.0));
  CHECK(l.slope == doctest::Approx(-0.5));
  CHECK(l.r_squared == doctest::Approx(1.0));
  const LinearFit p = fit_power_law(x, yp);
  CHECK(p.slope == doctest::Approx(1.3));
  CHECK(std::exp(p.intercept) == doctest::Approx(2.5));
  const LinearFit e = fit_exponential(x, ye);
  CHECK(e.slope == doctest::Approx(0.7));
  CHECK(e.intercept == doctest::Approx(0.2));

  // Noisy data: r^2 below one, slope close.
  std::mt19937_64 rng(3);
  std::normal_distribution<double> noise(0.0, 0.05);
  std::vector<double> yn;
  for (double v : x) yn.push_back(2.0 * std::pow(v, 0.9) * std::exp(noise(rng)));
  const LinearFit n = fit_power_law(x, yn);
  CHECK(n.slope == doctest::Approx(0.9).epsilon(0.1));
  CHECK(n.r_squared < 1.0);
  CHECK(n.r_squared > 0.9);
}

TEST_CASE("file_hash is FNV-1a 64 and provenance sidecars list hashes") {
  const fs::path dir = scratch("prov");
  write_file(dir / "empty.txt", "");
  write_file(dir / "a.txt", "a");
  CHECK(file_hash(dir / "empty.txt") == "cbf29ce484222325");
  CHECK(file_hash(dir / "a.txt") == "af63dc4c8601ec8c");

  Provenance p;
  p.command = "unit";
  p.seed = 9;
  p.config_json = R"({"k":1})";
  p.inputs = {dir / "a.txt"};
  p.outputs = {dir / "empty.txt"};
  write_provenance(p);
  const auto doc = nlohmann::json::parse(read_file(dir / "empty.txt.provenance.json"));
  CHECK(doc["command"] == "unit");
  CHECK(doc["seed"] == 9);
  CHECK(doc["config"]["k"] == 1);
  CHECK(doc["inputs"][0]["fnv1a64"] == "af63dc4c8601ec8c");
  CHECK(doc["outputs"][0]["path"] == "empty.txt");
}

TEST_CASE("run configuration") {
  SUBCASE("unknown keys and sections are rejected") {
    CHECK_THROWS_AS(RunConfig::parse(R"({"nonsense": {}})"), FormatError);
    CHECK_THROWS_AS(RunConfig::parse("[1]"), FormatError);
    CHECK_THROWS_AS(RunConfig::parse("{"), FormatError);
    GenDataSpec g;
    CHECK_THROWS_AS(RunConfig::parse(R"({"gen-data": {"bogus": 1}})").apply(g), FormatError);
    CHECK_THROWS_AS(RunConfig::parse(R"({"search": {"bogus": 1}})").search(std::nullopt), FormatError);
  }
  SUBCASE("values reach the specs") {
    const RunConfig rc = RunConfig::parse(
        R"({"search": {"profile": "LUBM-Star", "seed": 11}, "gen-data": {"bushy_fraction": 0.25},
            "train": {"epochs": 5}, "front-sweep": {"ks": [1, 3], "sizes": [6]}})");
    const relax::SearchConfig s = rc.search(std::nullopt);
    CHECK(s.iterations == 500);
    CHECK(s.seed == 11);
    CHECK(rc.search(std::string("Wikidata-Path")).gamma == doctest::Approx(0.5));
    GenDataSpec g;
    rc.apply(g);
    CHECK(g.corpus.bushy_fraction == 0.25);
    TrainSpec t;
    rc.apply(t);
    CHECK(t.train.epochs == 5);
    FrontSweepSpec f;
    rc.apply(f);
    CHECK(f.ks == std::vector<std::size_t>{1, 3});
    CHECK(f.selection.sizes == std::vector<std::size_t>{6});
  }
}

TEST_CASE("measured columns are blanked, all others kept") {
  CsvTable t({"n", "wall_clock_ms", "fit_slope", "evaluations"});
  t.add_row({"4", "1.5", "0.9", "12"});
  const CsvTable b = blank_measured_columns(t);
  CHECK(b.header() == t.header());
  CHECK(b.rows()[0] == std::vector<std::string>{"4", "", "", "12"});
}

TEST_CASE("random plans are valid and respect connectivity") {
  const GeneratedData data = generate_synthetic(tiny_corpus(5).generator);
  std::mt19937_64 rng(8);
  std::size_t bushy = 0;
  for (const Query& q : data.queries) {
    const std::size_t n = q.patterns.size();
    for (int rep = 0; rep < 10; ++rep) {
      for (bool cross : {false, true}) {
        const Plan p = random_bushy(q, cross, rng);
        CHECK(p.size() == n);
        const auto d = decode_checked(encode(p));
        CHECK(d.violations.empty());
        if (!is_left_linear(p)) ++bushy;
        if (!cross) {
          for (std::size_t v = n; v < p.node_count(); ++v) {
            CHECK(connected(q, p.pattern_mask(p.join(v).left), p.pattern_mask(p.join(v).right)));
          }
        }
        const auto order = random_order(q, cross, rng);
        CHECK(order.size() == n);
        if (!cross && n > 1) {
          std::uint64_t prefix = std::uint64_t{1} << order[0];
          for (std::size_t k = 1; k < n; ++k) {
            CHECK(connected(q, prefix, std::uint64_t{1} << order[k]));
            prefix |= std::uint64_t{1} << order[k];
          }
        }
      }
    }
  }
  CHECK(bushy > 0);
}

TEST_CASE("corpus round-trips and labels match the exact oracle") {
  CorpusConfig cfg = tiny_corpus(4);
  const Corpus corpus = build_corpus(cfg);
  CHECK(corpus.queries.size() == 3 * 2 * 2);  // sizes 2..4, two shapes
  CHECK(corpus.plans.size() == corpus.queries.size() * cfg.plans_per_query);
  for (const auto& lp : corpus.plans) {
    const Query& q = corpus.queries[lp.query];
    CHECK(lp.c_out == c_out_true(corpus.store, q, lp.plan).total);
  }
  const Corpus again = build_corpus(cfg);
  for (std::size_t i = 0; i < corpus.plans.size(); ++i) CHECK(again.plans[i].plan == corpus.plans[i].plan);

  const fs::path dir = scratch("corpus");
  write_corpus(corpus, dir, to_json(cfg));
  const Corpus back = load_corpus(dir);
  REQUIRE(back.plans.size() == corpus.plans.size());
  REQUIRE(back.queries.size() == corpus.queries.size());
  CHECK(back.store.size() == corpus.store.size());
  for (std::size_t i = 0; i < corpus.plans.size(); ++i) {
    CHECK(back.plans[i].query == corpus.plans[i].query);
    CHECK(encode(back.plans[i].plan) == encode(corpus.plans[i].plan));
    CHECK(back.plans[i].c_out == corpus.plans[i].c_out);
    CHECK(c_out_true(back.store, back.queries[back.plans[i].query], back.plans[i].plan).total ==
          corpus.plans[i].c_out);
  }

  cfg.bushy_fraction = 1.5;
  CHECK_THROWS(build_corpus(cfg));
}

TEST_CASE("query selection caps per shape and size") {
  const Corpus corpus = build_corpus(tiny_corpus(6));
  const auto sel = select_queries(corpus, {{QueryShape::kPath}, {3, 4}, 1});
  REQUIRE(sel.size() == 2);
  for (std::size_t i : sel) CHECK(corpus.queries[i].shape == QueryShape::kPath);
  CHECK(corpus.queries[sel[0]].patterns.size() == 3);
  CHECK(corpus.queries[sel[1]].patterns.size() == 4);
}
