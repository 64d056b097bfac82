#include "joinrelax/tensor/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace joinrelax::tensor {

GradCheckResult finite_diff_check(const ScalarFunction& f, const Matrix& x, double h) {
  Matrix analytic;
  {
    Tape tape;
    Var input = tape.leaf(x);
    Var out = f(tape, input);
    tape.backward(out);
    analytic = tape.grad(input);
  }
  auto evaluate = [&](const Matrix& at) {
    Tape tape;
    return f(tape, tape.constant(at)).scalar();
  };

  GradCheckResult result;
  Matrix probe = x;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      if (!std::isfinite(x(i, j))) continue;
      probe(i, j) = x(i, j) + h;
      const double up = evaluate(probe);
      probe(i, j) = x(i, j) - h;
      const double down = evaluate(probe);
      probe(i, j) = x(i, j);
      const double numeric = (up - down) / (2.0 * h);
      const double a = analytic(i, j);
      const double err = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-8});
      if (err > result.max_relative_error || result.row < 0) {
        result = {err, i, j, a, numeric};
      }
    }
  }
  return result;
}

}  // namespace joinrelax::tensor
