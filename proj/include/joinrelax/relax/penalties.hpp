#pragma once

#include <cstddef>

#include "joinrelax/relax/config.hpp"
#include "joinrelax/tensor/ops.hpp"

namespace joinrelax::relax {

using tensor::Var;

struct DegreePenalties {
  Var to;  // Σ_{v<n} (d_out - 1)²
  Var ji;  // Σ_{joins} (d_in - 2)²
  Var jo;  // d_out(root)² + Σ_{other joins} (d_out - 1)²
};

struct Penalties {
  Var to, ji, jo, ll, acyc;
};

// Node indices are 0-based: patterns 0..n-1, joins n..2n-2, root 2n-2.
DegreePenalties degree_penalties(Var a, std::size_t n);

// First join j0 = n takes two pattern children and no join child; every other join takes
// one of each.
Var left_linear_penalty(Var a, std::size_t n);

// tr(e^A) - N.
Var acyclicity_penalty(Var a);

Penalties all_penalties(Var a, std::size_t n);

// Weighted sum λ_TO P_TO + λ_JI P_JI + λ_JO P_JO + λ_LL P_LL + λ_ACYC P_ACYC.
Var structural_penalty(const Penalties& p, const PenaltyWeights& w);

// cost + λ(t) P_struct.
Var total_loss(Var cost, Var p_struct, std::size_t t, const SearchConfig& config);

}  // namespace joinrelax::relax
