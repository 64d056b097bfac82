#include "joinrelax/discrete/search.hpp"

#include <chrono>
#include <optional>
#include <vector>

#include "joinrelax/error.hpp"
#include "joinrelax/plan/enumerate.hpp"

namespace joinrelax::discrete {

namespace {

class Stopwatch {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

DiscreteResult finish(Plan plan, double cost, const CostFunction& f, std::size_t before, const Stopwatch& clock) {
  return {std::move(plan), cost, f.evaluations() - before, clock.ms()};
}

}  // namespace

std::size_t exhaustive_evaluations(std::size_t n) {
  return static_cast<std::size_t>(count_plans(n, PlanShape::kLeftLinear));
}

std::size_t dp_evaluations(std::size_t n) {
  if (n <= 1) return 1;
  // Σ_{|S| >= 2} |S| = n 2^(n-1) - n
  return n * (std::size_t{1} << (n - 1)) - n;
}

std::size_t greedy_evaluations(std::size_t n) {
  if (n < 2) return 0;
  std::size_t total = n * (n - 1);
  for (std::size_t m = 2; m + 1 <= n; ++m) total += n - m;
  return total;
}

DiscreteResult exhaustive(std::size_t n, CostFunction& cost, std::size_t cap) {
  if (n == 0) throw StructuralError("exhaustive search needs at least one pattern");
  if (n > cap) {
    throw BudgetError("exhaustive search over n=" + std::to_string(n) + " exceeds the cap of " + std::to_string(cap));
  }
  const Stopwatch clock;
  const std::size_t before = cost.evaluations();
  LeftLinearEnumerator plans(n);
  std::optional<Plan> best;
  double best_cost = 0.0;
  while (auto plan = plans.next()) {
    const double c = cost(*plan);
    if (!best || c < best_cost) {
      best = std::move(plan);
      best_cost = c;
    }
  }
  return finish(std::move(*best), best_cost, cost, before, clock);
}

DiscreteResult dp_left_linear(std::size_t n, CostFunction& cost, std::size_t cap) {
  if (n == 0) throw StructuralError("dynamic programming needs at least one pattern");
  if (n > cap) {
    throw BudgetError("dynamic programming over n=" + std::to_string(n) + " exceeds the cap of " +
                      std::to_string(cap));
  }
  const Stopwatch clock;
  const std::size_t before = cost.evaluations();
  if (n == 1) {
    Plan leaf = Plan::leaf(0);
    const double c = cost(leaf);
    return finish(std::move(leaf), c, cost, before, clock);
  }

  const std::size_t subsets = std::size_t{1} << n;
  std::vector<std::vector<std::size_t>> order(subsets);  // best join order per subset
  std::vector<double> best(subsets, 0.0);
  for (std::size_t p = 0; p < n; ++p) order[std::size_t{1} << p] = {p};

  // Subsets in increasing numeric order visit every proper subset first.
  for (std::size_t set = 1; set < subsets; ++set) {
    if ((set & (set - 1)) == 0) continue;
    bool found = false;
    for (std::size_t p = 0; p < n; ++p) {
      if (!(set & (std::size_t{1} << p))) continue;
      std::vector<std::size_t> candidate = order[set & ~(std::size_t{1} << p)];
      candidate.push_back(p);
      const double c = cost(Plan::left_linear(candidate));
      if (!found || c < best[set]) {
        found = true;
        best[set] = c;
        order[set] = std::move(candidate);
      }
    }
  }
  const std::size_t full = subsets - 1;
  return finish(Plan::left_linear(order[full]), best[full], cost, before, clock);
}

DiscreteResult greedy(std::size_t n, CostFunction& cost) {
  if (n < 2) throw StructuralError("greedy search needs at least two patterns");
  const Stopwatch clock;
  const std::size_t before = cost.evaluations();

  std::vector<std::size_t> prefix;
  double prefix_cost = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      const std::vector<std::size_t> pair{a, b};
      const double c = cost(Plan::left_linear(pair));
      if (prefix.empty() || c < prefix_cost) {
        prefix = pair;
        prefix_cost = c;
      }
    }
  }
  std::vector<bool> used(n, false);
  used[prefix[0]] = used[prefix[1]] = true;
  while (prefix.size() < n) {
    std::size_t pick = n;
    double pick_cost = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      if (used[p]) continue;
      std::vector<std::size_t> candidate = prefix;
      candidate.push_back(p);
      const double c = cost(Plan::left_linear(candidate));
      if (pick == n || c < pick_cost) {
        pick = p;
        pick_cost = c;
      }
    }
    prefix.push_back(pick);
    used[pick] = true;
    prefix_cost = pick_cost;
  }
  return finish(Plan::left_linear(prefix), prefix_cost, cost, before, clock);
}

}  // namespace joinrelax::discrete
