#include <doctest.h>

#include <cmath>
#include <random>

#include "joinrelax/error.hpp"
#include "joinrelax/tensor/adam.hpp"
#include "joinrelax/tensor/gradcheck.hpp"
#include "joinrelax/tensor/ops.hpp"
#include "joinrelax/tensor/tape.hpp"

using namespace joinrelax;
using namespace joinrelax::tensor;

namespace {

Matrix random_matrix(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> d(0.0, scale);
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = d(rng);
  return m;
}

// Plain truncated series, independent of the tape implementation.
double trace_expm_oracle(const Matrix& a, int terms) {
  Matrix power = Matrix::Identity(a.rows(), a.cols());
  double total = 0.0, factorial = 1.0;
  for (int k = 0; k < terms; ++k) {
    if (k > 0) {
      power = power * a;
      factorial *= k;
    }
    total += power.trace() / factorial;
  }
  return total;
}

}  // namespace

TEST_CASE("basic op values") {
  Tape tape;
  Matrix am(2, 2), bm(2, 2);
  am << 1, 2, 3, 4;
  bm << 5, 6, 7, 8;
  const Var a = tape.constant(am), b = tape.constant(bm);
  CHECK(matmul(a, b).value() == am * bm);
  CHECK(add(a, b).value() == am + bm);
  CHECK(sub(a, b).value() == am - bm);
  CHECK(mul(a, b).value() == am.cwiseProduct(bm));
  CHECK(transpose(a).value() == am.transpose());
  CHECK(sum_all(a).scalar() == 10.0);
  CHECK(sum_rows(a).value() == Matrix((Matrix(2, 1) << 3, 7).finished()));
  CHECK(sum_cols(a).value() == Matrix((Matrix(1, 2) << 4, 6).finished()));
  CHECK(slice(a, 1, 0, 1, 2).value() == am.row(1));
  CHECK_THROWS_AS(matmul(a, tape.constant(Matrix::Zero(3, 1))), StructuralError);
}

TEST_CASE("gradient of sum of squares is 2x") {
  std::mt19937_64 rng(1);
  const Matrix x = random_matrix(3, 4, rng);
  Tape tape;
  const Var v = tape.leaf(x);
  tape.backward(sum_all(square(v)));
  CHECK(tape.grad(v).isApprox(2.0 * x));
}

TEST_CASE("row softmax") {
  Tape tape;
  SUBCASE("equal logits give 1/w") {
    const Var s = row_softmax(tape.constant(Matrix::Constant(2, 5, 3.0)));
    for (Eigen::Index i = 0; i < s.value().size(); ++i) CHECK(s.value().data()[i] == doctest::Approx(0.2));
  }
  SUBCASE("masked entries are exactly zero and rows still sum to one") {
    Mask mask = Mask::Constant(3, 3, false);
    mask(0, 0) = mask(1, 2) = true;
    mask.row(2).setConstant(true);
    std::mt19937_64 rng(4);
    const Var s = row_softmax(tape.constant(random_matrix(3, 3, rng, 10.0)), &mask);
    CHECK(s.value()(0, 0) == 0.0);
    CHECK(s.value()(1, 2) == 0.0);
    CHECK(s.value().row(0).sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.value().row(1).sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.value().row(2).sum() == 0.0);
  }
  SUBCASE("large logits stay finite") {
    Matrix m(1, 2);
    m << 1000.0, -1000.0;
    const Var s = row_softmax(tape.constant(m));
    CHECK(s.value()(0, 0) == 1.0);
    CHECK(s.value()(0, 1) == 0.0);
  }
  SUBCASE("sum of softmax has zero gradient") {
    std::mt19937_64 rng(2);
    const Var l = tape.leaf(random_matrix(3, 4, rng));
    tape.backward(sum_all(row_softmax(l)));
    CHECK(tape.grad(l).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("every differentiable op passes a finite-difference check") {
  std::mt19937_64 rng(7);
  const Matrix w = random_matrix(4, 3, rng);
  const Matrix row = random_matrix(1, 3, rng);
  const Matrix other = random_matrix(3, 3, rng);
  Mask mask = Mask::Constant(3, 3, false);
  mask(0, 1) = true;
  std::mt19937_64 drop_rng(1);

  const std::vector<std::pair<const char*, ScalarFunction>> cases{
      {"matmul", [&](Tape& t, Var x) { return sum_all(square(matmul(x, t.constant(other)))); }},
      {"add/sub", [&](Tape& t, Var x) { return sum_all(square(sub(add(x, x), t.constant(other)))); }},
      {"mul", [&](Tape& t, Var x) { return sum_all(mul(x, t.constant(other))); }},
      {"scale", [&](Tape&, Var x) { return sum_all(square(add_scalar(scale(x, 2.5), 1.0))); }},
      {"scale_by", [&](Tape&, Var x) { return sum_all(scale_by(slice(x, 0, 0, 1, 1), x)); }},
      {"add_row", [&](Tape& t, Var x) { return sum_all(square(add_row(x, t.constant(row)))); }},
      {"transpose", [&](Tape& t, Var x) { return sum_all(mul(transpose(x), t.constant(other))); }},
      {"relu", [&](Tape&, Var x) { return sum_all(square(relu(x))); }},
      {"abs", [&](Tape&, Var x) { return sum_all(square(abs(add_scalar(x, 0.3)))); }},
      {"softmax", [&](Tape& t, Var x) { return sum_all(mul(row_softmax(x, &mask), t.constant(other))); }},
      {"layer_norm",
       [&](Tape& t, Var x) {
         return sum_all(mul(layer_norm(x, t.constant(row), t.constant(row)), t.constant(other)));
       }},
      {"sum_rows/cols", [&](Tape&, Var x) { return add(sum_all(square(sum_rows(x))), sum_all(square(sum_cols(x)))); }},
      {"trace_expm", [&](Tape&, Var x) { return trace_expm(scale(x, 0.3)); }},
      {"dropout (eval)", [&](Tape&, Var x) { return sum_all(square(dropout(x, 0.5, false, drop_rng))); }},
  };
  const Matrix x = random_matrix(3, 3, rng);
  for (const auto& [name, f] : cases) {
    CAPTURE(name);
    CHECK(finite_diff_check(f, x).max_relative_error < 1e-5);
  }
  (void)w;
}

TEST_CASE("finite-difference check is exact on a quadratic") {
  std::mt19937_64 rng(9);
  const Matrix x = random_matrix(2, 3, rng);
  const auto r = finite_diff_check([](Tape&, Var v) { return sum_all(square(v)); }, x);
  CHECK(r.max_relative_error < 1e-9);
}

TEST_CASE("trace of the matrix exponential") {
  Tape tape;
  CHECK(trace_expm(tape.constant(Matrix::Zero(4, 4))).scalar() - 4.0 == doctest::Approx(0.0));
  Matrix cycle(2, 2);
  cycle << 0, 1, 1, 0;
  const double expected = 2.0 * std::cosh(1.0) - 2.0;
  CHECK(trace_expm(tape.constant(cycle)).scalar() - 2.0 == doctest::Approx(expected).epsilon(1e-12));
  CHECK(trace_expm_oracle(cycle, 30) - 2.0 == doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(1.0862).epsilon(1e-4));

  std::mt19937_64 rng(12);
  const Matrix soft = random_matrix(5, 5, rng, 0.4).cwiseAbs();
  CHECK(trace_expm_value(soft).trace == doctest::Approx(trace_expm_oracle(soft, 40)).epsilon(1e-12));
  CHECK(trace_expm(tape.constant(soft)).scalar() == doctest::Approx(trace_expm_oracle(soft, 40)).epsilon(1e-12));

  // Strictly upper-triangular (a DAG) is nilpotent: the series is exact.
  Matrix dag = Matrix::Zero(5, 5);
  for (int i = 0; i < 5; ++i) {
    for (int j = i + 1; j < 5; ++j) dag(i, j) = 1.0;
  }
  CHECK(std::abs(trace_expm(tape.constant(dag)).scalar() - 5.0) < 1e-12);
}

TEST_CASE("dropout zeroes entries and rescales survivors while training") {
  Tape tape;
  std::mt19937_64 rng(3);
  const Var out = dropout(tape.constant(Matrix::Ones(50, 50)), 0.2, true, rng);
  std::size_t zeros = 0;
  for (Eigen::Index i = 0; i < out.value().size(); ++i) {
    const double v = out.value().data()[i];
    if (v == 0.0) {
      ++zeros;
    } else {
      CHECK(v == doctest::Approx(1.25));
    }
  }
  CHECK(zeros > 400);
  CHECK(zeros < 600);
}

TEST_CASE("checked tapes reject non-finite values") {
  Tape tape(true);
  Matrix m(1, 1);
  m << std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(tape.leaf(m), NumericError);
}

TEST_CASE("adam step matches the closed form") {
  Matrix p(1, 2);
  p << 1.0, -2.0;
  Adam adam({&p}, {.learning_rate = 0.1, .weight_decay = 0.01});
  Matrix g(1, 2);
  g << 0.5, -4.0;
  adam.step({g});
  // First step: m̂ = g, v̂ = g², so the update is lr * g / (|g| + eps) plus decoupled decay.
  for (int j = 0; j < 2; ++j) {
    const double start = j == 0 ? 1.0 : -2.0;
    const double expected = start - 0.1 * 0.01 * start - 0.1 * g(0, j) / (std::abs(g(0, j)) + 1e-8);
    CHECK(p(0, j) == doctest::Approx(expected).epsilon(1e-12));
  }
  // Second step by hand.
  Matrix m = 0.1 * g, v = 0.001 * g.cwiseProduct(g);
  const Matrix before = p;
  adam.step({g});
  m = 0.9 * m + 0.1 * g;
  v = 0.999 * v + 0.001 * g.cwiseProduct(g);
  for (int j = 0; j < 2; ++j) {
    const double mhat = m(0, j) / (1 - 0.81), vhat = v(0, j) / (1 - 0.999 * 0.999);
    const double expected = before(0, j) - 0.1 * 0.01 * before(0, j) - 0.1 * mhat / (std::sqrt(vhat) + 1e-8);
    CHECK(p(0, j) == doctest::Approx(expected).epsilon(1e-12));
  }
  CHECK(adam.steps() == 2);
}

TEST_CASE("adam leaves entries outside the mask untouched") {
  Matrix p = Matrix::Zero(2, 2);
  Adam adam({&p}, {.learning_rate = 0.5});
  Mask trainable = Mask::Constant(2, 2, true);
  trainable(1, 0) = false;
  adam.step({Matrix::Ones(2, 2)}, {&trainable});
  CHECK(p(1, 0) == 0.0);
  CHECK(p(0, 0) == doctest::Approx(-0.5));
}
