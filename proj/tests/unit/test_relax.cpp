#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "joinrelax/costmodel/model.hpp"
#include "joinrelax/error.hpp"
#include "joinrelax/plan/matrix.hpp"
#include "joinrelax/relax/config.hpp"
#include "joinrelax/relax/gumbel.hpp"
#include "joinrelax/relax/penalties.hpp"
#include "joinrelax/relax/search.hpp"
#include "joinrelax/tensor/gradcheck.hpp"

using namespace joinrelax;
using namespace joinrelax::relax;

namespace {

struct PenaltyValues {
  double to, ji, jo, ll, acyc;
};

// Loop restatement of the five penalties over a plain matrix (0-based: patterns 0..n-1,
// joins n..2n-2, root 2n-2).
PenaltyValues penalty_oracle(const Matrix& a, std::size_t n) {
  const std::size_t size = 2 * n - 1, root = size - 1;
  auto out = [&](std::size_t v) {
    double s = 0;
    for (std::size_t j = 0; j < size; ++j) s += a(v, j);
    return s;
  };
  auto in_from = [&](std::size_t v, std::size_t lo, std::size_t hi) {
    double s = 0;
    for (std::size_t i = lo; i < hi; ++i) s += a(i, v);
    return s;
  };
  PenaltyValues p{0, 0, 0, 0, 0};
  for (std::size_t v = 0; v < n; ++v) p.to += std::pow(out(v) - 1, 2);
  for (std::size_t v = n; v < size; ++v) p.ji += std::pow(in_from(v, 0, size) - 2, 2);
  p.jo = std::pow(out(root), 2);
  for (std::size_t v = n; v < root; ++v) p.jo += std::pow(out(v) - 1, 2);
  p.ll = std::pow(in_from(n, 0, n) - 2, 2) + std::pow(in_from(n, n, size), 2);
  for (std::size_t v = n + 1; v < size; ++v) {
    p.ll += std::pow(in_from(v, 0, n) - 1, 2) + std::pow(in_from(v, n, size) - 1, 2);
  }
  Matrix power = Matrix::Identity(static_cast<Eigen::Index>(size), static_cast<Eigen::Index>(size));
  double trace = 0, factorial = 1;
  for (int k = 0; k < 40; ++k) {
    if (k > 0) {
      power = power * a;
      factorial *= k;
    }
    trace += power.trace() / factorial;
  }
  p.acyc = trace - static_cast<double>(size);
  return p;
}

double weighted(const PenaltyValues& p, const PenaltyWeights& w) {
  return w.to * p.to + w.ji * p.ji + w.jo * p.jo + w.ll * p.ll + w.acyc * p.acyc;
}

double p_struct(const Matrix& a, std::size_t n, const PenaltyWeights& w = {}) {
  Tape tape;
  return structural_penalty(all_penalties(tape.constant(a), n), w).scalar();
}

costmodel::ModelParams tiny_model(std::uint64_t seed) {
  return costmodel::ModelParams::init({}, 8, seed);
}

Matrix query_features(std::size_t n, std::uint64_t seed) {
  const TripleStore store = fixtures::small_store(seed);
  return costmodel::build_features(fixtures::path_query(store, n), store, {});
}

}  // namespace

TEST_CASE("temperature and penalty schedules") {
  SearchConfig c;
  CHECK(anneal_temperature(0, c) == 5.0);
  CHECK(anneal_temperature(500, c) == doctest::Approx(3.0));
  CHECK(anneal_temperature(1000, c) == 1.0);
  CHECK(anneal_temperature(5000, c) == 1.0);
  CHECK(penalty_ramp(0, c) == 0.0);
  CHECK(penalty_ramp(1000, c) == doctest::Approx(2.6));
  CHECK(penalty_ramp(500, c) == doctest::Approx(2.6 / 128.0));
}

TEST_CASE("total loss is the cost alone at t=0") {
  Tape tape;
  SearchConfig c;
  const Var cost = tape.constant(Matrix::Constant(1, 1, 3.5));
  const Var pen = tape.constant(Matrix::Constant(1, 1, 100.0));
  CHECK(total_loss(cost, pen, 0, c).scalar() == 3.5);
  CHECK(total_loss(cost, pen, 1000, c).scalar() == doctest::Approx(3.5 + 260.0));
}

TEST_CASE("gumbel noise and softmax") {
  CHECK(gumbel_from_uniform(1.0 / std::exp(1.0)) == doctest::Approx(0.0).epsilon(1e-15));
  SearchConfig c;
  const Mask mask = logit_mask(3, c);
  CHECK(mask(0, 0));
  CHECK(mask(4, 3));                   // root row
  CHECK(mask(3, 1));                   // pattern column
  CHECK_FALSE(mask(0, 3));

  Tape tape;
  SUBCASE("equal logits, no noise: uniform over the allowed entries") {
    const Var a = gumbel_softmax(tape.constant(Matrix::Zero(5, 5)), Matrix::Zero(5, 5), 2.0, mask);
    for (Eigen::Index i = 0; i < 4; ++i) {
      const double width = static_cast<double>((!mask.row(i).array()).count());
      for (Eigen::Index j = 0; j < 5; ++j) CHECK(a.value()(i, j) == doctest::Approx(mask(i, j) ? 0.0 : 1.0 / width));
    }
    CHECK(a.value().row(4).isZero());
  }
  SUBCASE("a gap of 10 at tau 1 is nearly one-hot") {
    Matrix l = Matrix::Zero(5, 5);
    l(0, 3) = 10.0;
    const Var a = gumbel_softmax(tape.constant(l), Matrix::Zero(5, 5), 1.0, mask);
    CHECK(a.value()(0, 3) > 0.99);
  }
  SUBCASE("sampled rows are stochastic") {
    std::mt19937_64 rng(3);
    const Matrix l = init_logits(3, mask, 0.05, rng);
    for (int i = 0; i < 20; ++i) {
      const Var a = gumbel_softmax(tape.constant(l), sample_gumbel(5, 5, rng), 0.7, mask);
      for (Eigen::Index r = 0; r < 4; ++r) CHECK(std::abs(a.value().row(r).sum() - 1.0) <= 1e-9);
    }
  }
  SUBCASE("initial logits lie in range and masked entries hold zero") {
    std::mt19937_64 rng(4);
    const Matrix l = init_logits(4, logit_mask(4, c), 0.05, rng);
    const Mask m = logit_mask(4, c);
    for (Eigen::Index i = 0; i < l.rows(); ++i) {
      for (Eigen::Index j = 0; j < l.cols(); ++j) {
        if (m(i, j)) {
          CHECK(l(i, j) == 0.0);
        } else {
          CHECK(std::abs(l(i, j)) <= 0.05);
        }
      }
    }
  }
  SUBCASE("unmasked variant leaves pattern columns free") {
    SearchConfig open = c;
    open.mask_pattern_columns = false;
    open.mask_root_row = false;
    const Mask m = logit_mask(3, open);
    CHECK_FALSE(m(3, 1));
    CHECK_FALSE(m(4, 3));
    CHECK(m(2, 2));
  }
}

TEST_CASE("penalties vanish on every valid left-linear plan") {
  for (std::size_t n = 2; n <= 5; ++n) {
    for (const Plan& p : fixtures::all_left_linear(n)) {
      const Matrix a = encode(p.canonical());
      CHECK(std::abs(p_struct(a, n)) < 1e-9);
    }
  }
}

TEST_CASE("penalty examples") {
  const std::vector<std::size_t> order{0, 1, 2};
  const Matrix valid = encode(Plan::left_linear(order));
  Tape tape;
  const auto d = degree_penalties(tape.constant(valid), 3);
  CHECK(d.to.scalar() == 0.0);
  CHECK(d.ji.scalar() == 0.0);
  CHECK(d.jo.scalar() == 0.0);

  Matrix three = valid;
  three(2, 4) = 0.0;
  three(2, 3) = 1.0;
  CHECK(degree_penalties(tape.constant(three), 3).ji.scalar() >= 1.0);

  const Plan bushy({0, 1, 2, 3}, {{0, 1}, {2, 3}, {4, 5}});
  const Matrix b = encode(bushy);
  CHECK(left_linear_penalty(tape.constant(b), 4).scalar() > 0.0);
  CHECK(degree_penalties(tape.constant(b), 4).ji.scalar() == 0.0);

  const std::vector<std::size_t> two{0, 1};
  CHECK(left_linear_penalty(tape.constant(encode(Plan::left_linear(two))), 2).scalar() == 0.0);
}

TEST_CASE("penalties match the loop oracle on uniform and random soft matrices") {
  const PenaltyWeights w{1.0, 2.0, 3.0, 4.0, 5.0};
  SUBCASE("uniform rows, n=3") {
    Matrix a = Matrix::Constant(5, 5, 0.25);
    a.diagonal().setZero();
    Tape tape;
    const auto p = all_penalties(tape.constant(a), 3);
    const auto o = penalty_oracle(a, 3);
    CHECK(p.to.scalar() == doctest::Approx(o.to).epsilon(1e-12));
    CHECK(p.ji.scalar() == doctest::Approx(o.ji).epsilon(1e-12));
    CHECK(p.jo.scalar() == doctest::Approx(o.jo).epsilon(1e-12));
    CHECK(p.ll.scalar() == doctest::Approx(o.ll).epsilon(1e-12));
    CHECK(p.acyc.scalar() == doctest::Approx(o.acyc).epsilon(1e-12));
  }
  SUBCASE("random") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 0.5);
    for (std::size_t n = 2; n <= 6; ++n) {
      const auto size = static_cast<Eigen::Index>(2 * n - 1);
      Matrix a(size, size);
      for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = u(rng);
      CHECK(p_struct(a, n, w) == doctest::Approx(weighted(penalty_oracle(a, n), w)).epsilon(1e-10));
    }
  }
}

TEST_CASE("single-edge corruptions are penalised") {
  std::mt19937_64 rng(21);
  for (std::size_t n = 2; n <= 5; ++n) {
    const auto plans = fixtures::all_left_linear(n);
    for (int trial = 0; trial < 50; ++trial) {
      Matrix a = encode(plans[rng() % plans.size()].canonical());
      const auto i = static_cast<Eigen::Index>(rng() % a.rows());
      const auto j = static_cast<Eigen::Index>(rng() % a.cols());
      a(i, j) = 1.0 - a(i, j);
      CHECK(p_struct(a, n) > 1e-6);
    }
  }
}

TEST_CASE("penalty gradients pass finite-difference checks") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 0.6);
  Matrix a(7, 7);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = u(rng);
  const std::vector<std::pair<const char*, tensor::ScalarFunction>> cases{
      {"to", [](Tape&, Var x) { return degree_penalties(x, 4).to; }},
      {"ji", [](Tape&, Var x) { return degree_penalties(x, 4).ji; }},
      {"jo", [](Tape&, Var x) { return degree_penalties(x, 4).jo; }},
      {"ll", [](Tape&, Var x) { return left_linear_penalty(x, 4); }},
      {"acyc", [](Tape&, Var x) { return acyclicity_penalty(x); }},
  };
  for (const auto& [name, f] : cases) {
    CAPTURE(name);
    CHECK(tensor::finite_diff_check(f, a).max_relative_error < 1e-5);
  }
}

TEST_CASE("bushy mode drops the left-linear weight") {
  SearchConfig c;
  c.left_linear = false;
  CHECK(c.effective_weights().ll == 0.0);
  CHECK(c.effective_weights().to == 2000.0);
}

TEST_CASE("profiles and config files") {
  CHECK(profile("defaults") == SearchConfig{});
  const SearchConfig star = profile("LUBM-Star");
  CHECK(star.iterations == 500);
  CHECK(star.learning_rate == 1.7);
  CHECK(star.weights.acyc == 3081.0);
  CHECK(star.q == 6.5);
  CHECK(profile("Wikidata-Path").gamma == 0.5);
  CHECK(profile_names().size() == 5);
  CHECK_THROWS(profile("nope"));

  const SearchConfig c = config_from_json(R"({"profile":"LUBM-Path","alpha":0.5,"seed":9})");
  CHECK(c.learning_rate == 0.5);
  CHECK(c.seed == 9);
  CHECK(c.tau0 == 3.7);
  CHECK(config_from_json(config_to_json(c)) == c);
  CHECK_THROWS_AS(config_from_json(R"({"bogus":1})"), FormatError);

  SearchConfig bad;
  bad.tau_min = 0.0;
  CHECK_THROWS(bad.validate());
  bad = {};
  bad.fronts = 0;
  CHECK_THROWS(bad.validate());
}

TEST_CASE("full loss gradient matches finite differences") {
  const costmodel::ModelParams model = tiny_model(3);
  const Matrix x = query_features(3, 5);
  SearchConfig c;
  const Mask mask = logit_mask(3, c);
  std::mt19937_64 rng(6);
  for (std::size_t t : {0u, 700u, 999u}) {
    const Matrix l = init_logits(3, mask, 1.0, rng);
    const Matrix g = sample_gumbel(5, 5, rng);
    const auto r = tensor::finite_diff_check(
        [&](Tape& tape, Var v) {
          const Var a = gumbel_softmax(v, g, anneal_temperature(t, c), mask);
          const Var cost = costmodel::forward(model, costmodel::bind(tape, model, false), tape.constant(x), a);
          return total_loss(cost, structural_penalty(all_penalties(a, 3), c.effective_weights()), t, c);
        },
        l);
    CAPTURE(t);
    CHECK(r.max_relative_error < 1e-4);
  }
}

TEST_CASE("search contracts") {
  const costmodel::ModelParams model = tiny_model(7);
  SearchConfig c;
  c.iterations = 200;

  SUBCASE("n=2 returns the only plan") {
    const SearchResult r = optimize(model, query_features(2, 1), c);
    const std::vector<std::size_t> two{0, 1};
    CHECK(r.plan == Plan::left_linear(two).canonical());
  }
  SUBCASE("trace invariants and a valid plan") {
    const Matrix x = query_features(4, 2);
    const SearchResult r = optimize(model, x, c);
    REQUIRE(r.trace.size() == 200);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& rec : r.trace) {
      CHECK(rec.tau == anneal_temperature(rec.t, c));
      CHECK(rec.lambda_t == penalty_ramp(rec.t, c));
      if (rec.retained) {
        CHECK(rec.p_struct < c.gamma);
        CHECK(rec.cost < best);
        best = rec.cost;
      }
    }
    CHECK(r.best_cost == best);
    CHECK(decode_checked(encode(r.plan)).plan.has_value());
    CHECK(is_left_linear(r.plan));
    CHECK(r.plan_output == doctest::Approx(costmodel::forward_value(model, x, encode(r.plan))));
    CHECK(r.projected_from.row(r.projected_from.rows() - 1).isZero());
  }
  SUBCASE("identical configs give identical traces") {
    const Matrix x = query_features(4, 3);
    const SearchResult a = optimize(model, x, c);
    const SearchResult b = optimize(model, x, c);
    CHECK(a.plan == b.plan);
    REQUIRE(a.trace.size() == b.trace.size());
    for (std::size_t i = 0; i < a.trace.size(); ++i) {
      CHECK(a.trace[i].cost == b.trace[i].cost);
      CHECK(a.trace[i].p_struct == b.trace[i].p_struct);
    }
  }
  SUBCASE("one front equals a single search; fronts nest and parallel runs agree") {
    const Matrix x = query_features(4, 4);
    const MultiSearchResult one = optimize_multi(model, x, c);
    const SearchResult single = optimize(model, x, c);
    REQUIRE(one.fronts.size() == 1);
    CHECK(one.best().plan == single.plan);
    CHECK(one.best().trace.back().cost == single.trace.back().cost);

    SearchConfig many = c;
    many.fronts = 4;
    const MultiSearchResult four = optimize_multi(model, x, many);
    many.threads = 2;
    const MultiSearchResult threaded = optimize_multi(model, x, many);
    REQUIRE(four.fronts.size() == 4);
    CHECK(four.fronts[0].plan == single.plan);
    CHECK(four.best().plan_output <= one.best().plan_output);
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(four.fronts[i].plan == threaded.fronts[i].plan);
      CHECK(four.best().plan_output <= four.fronts[i].plan_output);
    }
    CHECK(four.best_front == threaded.best_front);
  }
  SUBCASE("even feature counts are rejected") {
    CHECK_THROWS_AS(optimize(model, Matrix::Zero(4, 31), c), StructuralError);
  }
}
