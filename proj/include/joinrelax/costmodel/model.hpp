#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "joinrelax/costmodel/features.hpp"
#include "joinrelax/tensor/ops.hpp"

namespace joinrelax::costmodel {

using tensor::Tape;
using tensor::Var;

inline constexpr std::size_t kGinLayers = 3;

struct GinLayerParams {
  Matrix eps;      // 1x1
  Matrix w1, b1;   // in x H, 1 x H
  Matrix w2, b2;   // H x H, 1 x H
  Matrix ln_gain;  // 1 x H
  Matrix ln_bias;  // 1 x H
};

struct ModelParams {
  FeatureLayout layout;
  std::size_t hidden = 64;
  double dropout = 0.1;
  bool log_target = true;

  Matrix w_proj;  // F x H, layer-1 skip
  std::array<GinLayerParams, kGinLayers> gin;
  Matrix head_w1, head_b1;  // H x H, 1 x H
  Matrix head_w2, head_b2;  // H x 1, 1 x 1

  static ModelParams init(const FeatureLayout& layout, std::size_t hidden, std::uint64_t seed);

  // Parameter tensors in a fixed order with stable names.
  std::vector<Matrix*> tensors();
  std::vector<const Matrix*> tensors() const;
  static std::vector<std::string> tensor_names();

  std::size_t parameter_count() const;
  void validate() const;  // shapes chain F -> H -> H -> H -> H -> 1
};

// Parameters placed on a tape, in the order of ModelParams::tensors().
struct BoundParams {
  std::vector<Var> vars;
};

BoundParams bind(Tape& tape, const ModelParams& params, bool trainable);

struct ForwardOptions {
  bool training = false;
  std::mt19937_64* rng = nullptr;  // required when training with dropout
};

// Network output Ĉ(X, A) >= 0 as a 1x1 Var; differentiable in X, A and bound params.
Var forward(const ModelParams& params, const BoundParams& bound, Var x, Var a,
            const ForwardOptions& options = {});

// Inference-mode output without a tape.
double forward_value(const ModelParams& params, const Matrix& x, const Matrix& a);

// Conversions between the network's target space and C_out units.
double to_cost(const ModelParams& params, double output);
double to_target(const ModelParams& params, double cost);

// max(p/c, c/p); both arguments must be positive.
double q_error(double predicted, double true_cost);

// q_error with +1 smoothing on both sides, for nonnegative costs.
double smoothed_q_error(double predicted, double true_cost);

}  // namespace joinrelax::costmodel
