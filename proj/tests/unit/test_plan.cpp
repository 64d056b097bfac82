#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "joinrelax/error.hpp"
#include "joinrelax/plan/enumerate.hpp"
#include "joinrelax/plan/io.hpp"
#include "joinrelax/plan/matrix.hpp"
#include "joinrelax/plan/projection.hpp"

using namespace joinrelax;

namespace {

bool has_violation(const DecodeResult& r, ViolationKind kind) {
  return std::any_of(r.violations.begin(), r.violations.end(), [&](const Violation& v) { return v.kind == kind; });
}

Matrix random_soft(std::size_t n, std::mt19937_64& rng) {
  const auto size = static_cast<Eigen::Index>(2 * n - 1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix m(size, size);
  for (Eigen::Index i = 0; i < size; ++i) {
    for (Eigen::Index j = 0; j < size; ++j) m(i, j) = u(rng);
  }
  return m;
}

}  // namespace

TEST_CASE("left_linear builds the chain with the first join deepest") {
  const std::vector<std::size_t> order{1, 0, 2};
  const Plan p = Plan::left_linear(order);
  CHECK(p.size() == 3);
  CHECK(p.root() == 4);
  CHECK(p.pattern_set(3) == std::vector<std::size_t>{0, 1});
  CHECK(p.pattern_set(4) == std::vector<std::size_t>{0, 1, 2});
  CHECK(p.leaf_order().size() == 3);
  CHECK(p.leaf_order()[2] == 2);
  CHECK(is_left_linear(p));
}

TEST_CASE("encode follows the adjacency layout") {
  SUBCASE("single pattern") {
    const Matrix m = encode(Plan::leaf(0));
    CHECK(m.rows() == 1);
    CHECK(m(0, 0) == 0.0);
  }
  SUBCASE("((t1 ⋈ t2) ⋈ t3)") {
    const std::vector<std::size_t> order{0, 1, 2};
    const Matrix m = encode(Plan::left_linear(order));
    Matrix expected = Matrix::Zero(5, 5);
    expected(0, 3) = expected(1, 3) = expected(3, 4) = expected(2, 4) = 1.0;
    CHECK(m == expected);
  }
  SUBCASE("root row is empty for every plan") {
    for (const Plan& p : fixtures::all_left_linear(4)) CHECK(encode(p).row(p.root()).sum() == 0.0);
  }
}

TEST_CASE("decode inverts encode over the full enumeration") {
  for (std::size_t n = 2; n <= 5; ++n) {
    for (const Plan& p : fixtures::all_left_linear(n)) {
      const DecodeResult r = decode_checked(encode(p));
      REQUIRE(r.plan.has_value());
      CHECK(r.violations.empty());
      CHECK(*r.plan == p.canonical());
      CHECK(encode(*r.plan) == encode(p));
    }
  }
}

TEST_CASE("decode reports structural violations") {
  const std::vector<std::size_t> order{0, 1, 2};
  const Matrix valid = encode(Plan::left_linear(order));

  SUBCASE("pattern joined into a pattern") {
    Matrix m = valid;
    m(0, 1) = 1.0;
    const auto r = decode_checked(m);
    CHECK_FALSE(r.plan.has_value());
    CHECK(has_violation(r, ViolationKind::kPatternInEdge));
  }
  SUBCASE("two-cycle between joins") {
    Matrix m = Matrix::Zero(7, 7);
    m(0, 4) = m(1, 4) = m(2, 5) = m(3, 6) = 1.0;
    m(4, 5) = m(5, 4) = 1.0;
    CHECK(has_violation(decode_checked(m), ViolationKind::kCycle));
  }
  SUBCASE("even dimension") { CHECK(has_violation(decode_checked(Matrix::Zero(4, 4)), ViolationKind::kEvenDimension)); }
  SUBCASE("fractional entry") {
    Matrix m = valid;
    m(0, 3) = 0.5;
    CHECK(has_violation(decode_checked(m), ViolationKind::kNonBinaryEntry));
  }
  SUBCASE("self loop") {
    Matrix m = valid;
    m(3, 3) = 1.0;
    CHECK(has_violation(decode_checked(m), ViolationKind::kSelfLoop));
  }
  SUBCASE("root with an out-edge") {
    Matrix m = valid;
    m(4, 3) = 1.0;
    CHECK(has_violation(decode_checked(m), ViolationKind::kRootOutEdge));
  }
  SUBCASE("join with three inputs") {
    Matrix m = valid;
    m(2, 4) = 0.0;
    m(2, 3) = 1.0;
    CHECK(has_violation(decode_checked(m), ViolationKind::kJoinInDegree));
  }
  SUBCASE("pattern with no parent") {
    Matrix m = valid;
    m(2, 4) = 0.0;
    CHECK(has_violation(decode_checked(m), ViolationKind::kOutDegree));
  }
  SUBCASE("decode throws with the violations attached") {
    Matrix m = valid;
    m(0, 1) = 1.0;
    try {
      (void)decode(m);
      FAIL("decode accepted an invalid matrix");
    } catch (const PlanDecodeError& e) {
      CHECK_FALSE(e.violations().empty());
    }
  }
}

TEST_CASE("left-linearity of plan shapes") {
  const std::vector<std::size_t> order{0, 1, 2};
  CHECK(is_left_linear(Plan::left_linear(order)));
  const std::vector<std::size_t> two{0, 1};
  CHECK(is_left_linear(Plan::left_linear(two)));
  const Plan bushy({0, 1, 2, 3}, {{0, 1}, {2, 3}, {4, 5}});
  CHECK_FALSE(is_left_linear(bushy));
}

TEST_CASE("enumeration yields n! distinct plans") {
  for (std::size_t n = 1; n <= 6; ++n) {
    LeftLinearEnumerator e(n);
    std::size_t count = 0;
    std::set<std::vector<std::size_t>> orders;
    while (auto p = e.next()) {
      ++count;
      orders.insert(e.current_order());
    }
    CHECK(count == count_plans(n, PlanShape::kLeftLinear));
    CHECK(orders.size() == count);
  }
  // Swapping the first two operands yields the same matrix, so 4! orders give 12 matrices.
  std::set<std::vector<double>> matrices;
  LeftLinearEnumerator e(4);
  while (auto p = e.next()) {
    const Matrix m = encode(*p);
    matrices.insert(std::vector<double>(m.data(), m.data() + m.size()));
  }
  CHECK(matrices.size() == 12);
}

TEST_CASE("plan counts follow n! and C(n-1) n!") {
  CHECK(count_plans(1, PlanShape::kLeftLinear) == 1);
  CHECK(count_plans(1, PlanShape::kBushy) == 1);
  CHECK(count_plans(3, PlanShape::kLeftLinear) == 6);
  CHECK(count_plans(5, PlanShape::kLeftLinear) == 120);
  CHECK(count_plans(3, PlanShape::kBushy) == 12);
  CHECK(count_plans(4, PlanShape::kBushy) == 5 * 24);
  CHECK_THROWS_AS(count_plans(40, PlanShape::kBushy), BudgetError);
}

TEST_CASE("projection") {
  SUBCASE("n=2 has a single answer") {
    std::mt19937_64 rng(1);
    const Plan p = project_discrete(random_soft(2, rng));
    const std::vector<std::size_t> order{0, 1};
    CHECK(p == Plan::left_linear(order).canonical());
  }
  SUBCASE("n=3 best-first walk") {
    Matrix soft = Matrix::Constant(5, 5, 0.1);
    soft(3, 4) = 0.9;
    soft(2, 4) = 0.8;
    const std::vector<std::size_t> order{0, 1, 2};
    CHECK(project_discrete(soft) == Plan::left_linear(order).canonical());
  }
  SUBCASE("fixes every valid plan") {
    for (std::size_t n = 2; n <= 5; ++n) {
      for (const Plan& p : fixtures::all_left_linear(n)) CHECK(project_discrete(encode(p)) == p.canonical());
    }
  }
  SUBCASE("always returns a valid left-linear plan") {
    std::mt19937_64 rng(5);
    for (std::size_t n = 2; n <= 8; ++n) {
      for (int i = 0; i < 100; ++i) {
        const Plan p = project_discrete(random_soft(n, rng));
        CHECK(p.size() == n);
        CHECK(is_left_linear(p));
        CHECK(decode_checked(encode(p)).plan.has_value());
      }
    }
  }
}

TEST_CASE("interpolation hits both endpoints and the midpoint") {
  const std::vector<std::size_t> a{0, 1, 2}, b{0, 2, 1};
  const Matrix p1 = encode(Plan::left_linear(a));
  const Matrix p2 = encode(Plan::left_linear(b));
  CHECK(interpolate(p1, p2, 0.0) == p1);
  CHECK(interpolate(p1, p2, 1.0) == p2);
  const Matrix mid = interpolate(p1, p2, 0.5);
  for (Eigen::Index i = 0; i < p1.rows(); ++i) {
    for (Eigen::Index j = 0; j < p1.cols(); ++j) {
      CHECK(mid(i, j) == doctest::Approx(p1(i, j) == p2(i, j) ? p1(i, j) : 0.5));
    }
  }
}

TEST_CASE("plan files round-trip with 1-based edges") {
  const std::vector<std::size_t> order{2, 0, 1};
  const Plan p = Plan::left_linear(order);
  const std::string text = plan_to_json("q7", p);
  CHECK(text.find("\"edges\"") != std::string::npos);
  const PlanDocument doc = plan_from_json(text);
  CHECK(doc.query_id == "q7");
  CHECK(encode(doc.plan) == encode(p));
  CHECK_THROWS_AS(plan_from_json(R"({"query_id":"q","n":3,"edges":[[1,2]]})"), PlanDecodeError);
  CHECK_THROWS_AS(plan_from_json(R"({"query_id":"q","n":3,"edges":[[1,9]]})"), FormatError);
  CHECK_THROWS_AS(plan_from_json(R"({"query_id":"q","n":3,"edges":[1]})"), FormatError);
  CHECK_THROWS_AS(plan_from_json(R"({"query_id":"q","edges":[]})"), FormatError);
}

TEST_CASE("matrix text round-trips") {
  std::mt19937_64 rng(3);
  const Matrix m = random_soft(3, rng);
  std::stringstream ss;
  write_matrix(ss, m);
  const Matrix back = read_matrix(ss);
  CHECK(back.isApprox(m, 1e-15));
}

TEST_CASE("canonical form identifies operand swaps") {
  const Plan a({0, 1, 2}, {{0, 1}, {3, 2}});
  const Plan b({0, 1, 2}, {{1, 0}, {2, 3}});
  CHECK(a.canonical() == b.canonical());
  CHECK(encode(a) == encode(b));
}
