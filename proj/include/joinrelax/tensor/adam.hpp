#pragma once

#include <cstddef>
#include <vector>

#include "joinrelax/tensor/matrix.hpp"

namespace joinrelax::tensor {

// Adam with bias correction; optional decoupled weight decay.
class Adam {
 public:
  struct Options {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 0.0;
  };

  Adam(std::vector<Matrix*> params, Options options);

  // grads aligned with the parameter list; where a mask is given, only its true entries are
  // updated.
  void step(const std::vector<Matrix>& grads, const std::vector<const Mask*>& masks = {});

  std::size_t steps() const { return t_; }
  Options& options() { return options_; }

 private:
  std::vector<Matrix*> params_;
  std::vector<Matrix> m_;
  std::vector<Matrix> v_;
  Options options_;
  std::size_t t_ = 0;
};

}  // namespace joinrelax::tensor
