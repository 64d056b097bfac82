#pragma once

#include <cstddef>

#include "joinrelax/discrete/cost_function.hpp"

namespace joinrelax::discrete {

struct DiscreteResult {
  Plan plan = Plan::leaf(0);
  double cost = 0.0;
  std::size_t evaluations = 0;
  double wall_clock_ms = 0.0;
};

inline constexpr std::size_t kExhaustiveCap = 8;
inline constexpr std::size_t kDynamicProgrammingCap = 20;

// Minimum over all n! left-linear plans; ties keep the first in enumeration order.
DiscreteResult exhaustive(std::size_t n, CostFunction& cost, std::size_t cap = kExhaustiveCap);

// Best left-linear prefix per pattern subset, extended one pattern at a time.
DiscreteResult dp_left_linear(std::size_t n, CostFunction& cost, std::size_t cap = kDynamicProgrammingCap);

// Cheapest ordered first pair, then the cheapest single-pattern extension per step.
DiscreteResult greedy(std::size_t n, CostFunction& cost);

// Closed-form evaluation counts.
std::size_t exhaustive_evaluations(std::size_t n);
std::size_t dp_evaluations(std::size_t n);
std::size_t greedy_evaluations(std::size_t n);

}  // namespace joinrelax::discrete
