#include "joinrelax/relax/gumbel.hpp"

#include <cmath>

#include "joinrelax/error.hpp"
#include "joinrelax/random.hpp"

namespace joinrelax::relax {

Mask logit_mask(std::size_t n, const SearchConfig& config) {
  if (n < 2) throw StructuralError("a search needs at least two patterns");
  const auto size = static_cast<Eigen::Index>(2 * n - 1);
  const auto leaves = static_cast<Eigen::Index>(n);
  Mask mask = Mask::Constant(size, size, false);
  for (Eigen::Index i = 0; i < size; ++i) mask(i, i) = true;
  if (config.mask_pattern_columns) mask.leftCols(leaves).setConstant(true);
  if (config.mask_root_row) mask.row(size - 1).setConstant(true);
  return mask;
}

Matrix sample_gumbel(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  Matrix g(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) g(i, j) = gumbel_from_uniform(open_unit(rng()));
  return g;
}

Var gumbel_softmax(Var logits, const Matrix& noise, double tau, const Mask& mask) {
  if (!(tau > 0.0)) throw DomainError("temperature must be positive");
  Tape& tape = *logits.tape();
  const Var perturbed = tensor::add(logits, tape.constant(noise));
  return tensor::row_softmax(tensor::scale(perturbed, 1.0 / tau), &mask);
}

Matrix init_logits(std::size_t n, const Mask& mask, double range, std::mt19937_64& rng) {
  const auto size = static_cast<Eigen::Index>(2 * n - 1);
  std::uniform_real_distribution<double> dist(-range, range);
  Matrix l = Matrix::Zero(size, size);
  for (Eigen::Index i = 0; i < size; ++i)
    for (Eigen::Index j = 0; j < size; ++j)
      if (!mask(i, j)) l(i, j) = dist(rng);
  return l;
}

}  // namespace joinrelax::relax
