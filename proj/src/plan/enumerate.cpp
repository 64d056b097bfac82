#include "joinrelax/plan/enumerate.hpp"

#include <algorithm>
#include <numeric>

#include "joinrelax/error.hpp"

namespace joinrelax {

LeftLinearEnumerator::LeftLinearEnumerator(std::size_t n) : order_(n) {
  if (n == 0) throw StructuralError("cannot enumerate plans over zero patterns");
  std::iota(order_.begin(), order_.end(), 0);
}

std::optional<Plan> LeftLinearEnumerator::next() {
  if (done_) return std::nullopt;
  if (started_ && !std::next_permutation(order_.begin(), order_.end())) {
    done_ = true;
    return std::nullopt;
  }
  started_ = true;
  return Plan::left_linear(order_);
}

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, std::size_t n) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw BudgetError("plan count for n=" + std::to_string(n) + " exceeds 64 bits");
  }
  return out;
}

}  // namespace

std::uint64_t count_plans(std::size_t n, PlanShape shape) {
  if (n == 0) throw DomainError("plan count needs n >= 1");
  std::uint64_t factorial = 1;
  for (std::uint64_t i = 2; i <= n; ++i) factorial = checked_mul(factorial, i, n);
  if (shape == PlanShape::kLeftLinear) return factorial;
  // Catalan C(k) = C(k-1) * 2(2k-1) / (k+1); the division is exact at every step.
  std::uint64_t catalan = 1;
  for (std::uint64_t k = 1; k + 1 <= n; ++k) {
    catalan = checked_mul(catalan, 2 * (2 * k - 1), n) / (k + 1);
  }
  return checked_mul(catalan, factorial, n);
}

}  // namespace joinrelax
