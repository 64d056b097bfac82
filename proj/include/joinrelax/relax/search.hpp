#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "joinrelax/costmodel/model.hpp"
#include "joinrelax/plan/plan.hpp"
#include "joinrelax/relax/config.hpp"
#include "joinrelax/relax/gumbel.hpp"

namespace joinrelax::relax {

struct TraceRecord {
  std::size_t t = 0;
  double tau = 0.0;
  double lambda_t = 0.0;
  double cost = 0.0;  // model output ĉ
  double p_struct = 0.0;
  bool retained = false;
};

struct SearchResult {
  std::uint64_t seed = 0;
  std::vector<TraceRecord> trace;
  bool retained_any = false;
  Matrix best_logits;  // L⋆; masked entries are meaningless
  double best_cost = std::numeric_limits<double>::infinity();  // C⋆ (model output)
  Matrix projected_from;  // soft adjacency handed to the projection
  Plan plan = Plan::leaf(0);
  double plan_output = 0.0;  // model output on encode(plan)
  double plan_cost = 0.0;    // the same in C_out units
  double wall_clock_ms = 0.0;
};

struct MultiSearchResult {
  std::vector<SearchResult> fronts;
  std::size_t best_front = 0;
  const SearchResult& best() const { return fronts.at(best_front); }
  double wall_clock_ms = 0.0;
};

// Soft adjacency softmax(L / tau) with zero noise, as used for projection.
Matrix noiseless_adjacency(const Matrix& logits, double tau, const Mask& mask);

// One gradient-based search front over the full query graph with features `x` (N x F).
SearchResult optimize(const costmodel::ModelParams& model, const Matrix& x, const SearchConfig& config);

// config.fronts independent fronts seeded by front_seed(config.seed, i); the winner has the
// lowest predicted cost of its projected plan, ties to the lowest front index.
MultiSearchResult optimize_multi(const costmodel::ModelParams& model, const Matrix& x, const SearchConfig& config);

}  // namespace joinrelax::relax
