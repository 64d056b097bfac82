#pragma once

#include <cstddef>
#include <random>

#include "joinrelax/relax/config.hpp"
#include "joinrelax/tensor/ops.hpp"

namespace joinrelax::relax {

using tensor::Mask;
using tensor::Matrix;
using tensor::Tape;
using tensor::Var;

// Forbidden logit entries (true) for a query of n patterns: the diagonal always, pattern
// columns and the root row when the config asks for them.
Mask logit_mask(std::size_t n, const SearchConfig& config);

// Independent Gumbel(0,1) samples G = -ln(-ln U).
Matrix sample_gumbel(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng);

inline double gumbel_from_uniform(double u) { return -std::log(-std::log(u)); }

// Row-wise softmax((L + G) / tau); masked entries come out exactly 0.
Var gumbel_softmax(Var logits, const Matrix& noise, double tau, const Mask& mask);

// Initial logits drawn from U[-range, range]; masked entries hold 0 and are never read.
Matrix init_logits(std::size_t n, const Mask& mask, double range, std::mt19937_64& rng);

}  // namespace joinrelax::relax
