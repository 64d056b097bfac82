#include "joinrelax/tensor/adam.hpp"

#include <cmath>

#include "joinrelax/error.hpp"

namespace joinrelax::tensor {

Adam::Adam(std::vector<Matrix*> params, Options options) : params_(std::move(params)), options_(options) {
  for (const Matrix* p : params_) {
    m_.push_back(Matrix::Zero(p->rows(), p->cols()));
    v_.push_back(Matrix::Zero(p->rows(), p->cols()));
  }
}

void Adam::step(const std::vector<Matrix>& grads, const std::vector<const Mask*>& masks) {
  if (grads.size() != params_.size()) throw StructuralError("gradient count does not match parameter count");
  ++t_;
  const double b1 = options_.beta1;
  const double b2 = options_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  for (std::size_t k = 0; k < params_.size(); ++k) {
    Matrix& p = *params_[k];
    const Matrix& g = grads[k];
    if (g.rows() != p.rows() || g.cols() != p.cols()) throw StructuralError("gradient shape mismatch");
    const Mask* mask = k < masks.size() ? masks[k] : nullptr;
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
      for (Eigen::Index j = 0; j < p.cols(); ++j) {
        if (mask && !(*mask)(i, j)) continue;
        double& m = m_[k](i, j);
        double& v = v_[k](i, j);
        m = b1 * m + (1.0 - b1) * g(i, j);
        v = b2 * v + (1.0 - b2) * g(i, j) * g(i, j);
        const double update = (m / c1) / (std::sqrt(v / c2) + options_.eps);
        p(i, j) -= options_.learning_rate * (update + options_.weight_decay * p(i, j));
      }
    }
  }
}

}  // namespace joinrelax::tensor
