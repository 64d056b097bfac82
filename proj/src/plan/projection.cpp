#include "joinrelax/plan/projection.hpp"

#include <vector>

#include "joinrelax/error.hpp"

namespace joinrelax {

Plan project_discrete(const tensor::Matrix& soft) {
  if (soft.rows() != soft.cols() || soft.rows() < 3 || soft.rows() % 2 == 0) {
    throw StructuralError("projection needs a square matrix of odd dimension >= 3");
  }
  const auto n_nodes = static_cast<std::size_t>(soft.rows());
  const std::size_t n = (n_nodes + 1) / 2;
  const std::size_t root = n_nodes - 1;
  auto at = [&](std::size_t i, std::size_t j) {
    return soft(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  };

  std::vector<bool> free_pattern(n, true);
  std::vector<bool> free_join(n_nodes, false);
  for (std::size_t j = n; j < root; ++j) free_join[j] = true;

  // The objective is separable in j and k, so each argmax is taken independently.
  auto best_free = [&](const std::vector<bool>& free, std::size_t lo, std::size_t hi, std::size_t c) {
    std::size_t best = hi;
    for (std::size_t i = lo; i < hi; ++i) {
      if (free[i] && (best == hi || at(i, c) > at(best, c))) best = i;
    }
    return best;
  };

  std::vector<Join> joins(n - 1);
  std::size_t c = root;
  for (std::size_t step = 0; step + 2 < n; ++step) {
    const std::size_t j = best_free(free_join, n, root, c);
    const std::size_t k = best_free(free_pattern, 0, n, c);
    joins[c - n] = {j, k};
    free_join[j] = false;
    free_pattern[k] = false;
    c = j;
  }
  std::vector<std::size_t> rest;
  for (std::size_t k = 0; k < n; ++k) {
    if (free_pattern[k]) rest.push_back(k);
  }
  joins[c - n] = {rest.at(0), rest.at(1)};

  std::vector<std::size_t> patterns(n);
  for (std::size_t i = 0; i < n; ++i) patterns[i] = i;
  return Plan(std::move(patterns), std::move(joins)).canonical();
}

}  // namespace joinrelax
