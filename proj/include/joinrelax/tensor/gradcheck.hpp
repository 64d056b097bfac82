#pragma once

#include <functional>

#include "joinrelax/tensor/tape.hpp"

namespace joinrelax::tensor {

// Builds a scalar on `tape` from the input variable. Must be pure: any randomness (Gumbel
// noise, dropout) has to be frozen by the caller.
using ScalarFunction = std::function<Var(Tape& tape, Var x)>;

struct GradCheckResult {
  double max_relative_error = 0.0;
  Eigen::Index row = -1;  // coordinate attaining the maximum
  Eigen::Index col = -1;
  double analytic = 0.0;
  double numeric = 0.0;
};

// Compares the tape gradient of f at x with central differences (f(x+h e) - f(x-h e))/2h,
// coordinate by coordinate. Relative error uses max(|analytic|, |numeric|, 1e-8) as the
// denominator. Non-finite coordinates of x are skipped.
GradCheckResult finite_diff_check(const ScalarFunction& f, const Matrix& x, double h = 1e-5);

}  // namespace joinrelax::tensor
