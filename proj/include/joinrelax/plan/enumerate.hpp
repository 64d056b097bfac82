#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "joinrelax/plan/plan.hpp"

namespace joinrelax {

// Streams the n! left-linear plans over patterns 0..n-1, one per leaf permutation, in
// lexicographic permutation order.
class LeftLinearEnumerator {
 public:
  explicit LeftLinearEnumerator(std::size_t n);

  std::optional<Plan> next();
  const std::vector<std::size_t>& current_order() const { return order_; }

 private:
  std::vector<std::size_t> order_;
  bool started_ = false;
  bool done_ = false;
};

enum class PlanShape { kLeftLinear, kBushy };

// left-linear: n!; bushy: C(n-1) * n!. Throws BudgetError when the count exceeds 64 bits.
std::uint64_t count_plans(std::size_t n, PlanShape shape);

}  // namespace joinrelax
