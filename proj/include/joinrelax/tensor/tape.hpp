#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <initializer_list>
#include <string>

#include "joinrelax/tensor/matrix.hpp"

namespace joinrelax::tensor {

class Tape;

// Handle to a value recorded on a Tape. Cheap to copy; valid while its tape lives.
class Var {
 public:
  Var() = default;

  const Matrix& value() const;
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }
  // Value of a 1x1 tensor.
  double scalar() const;
  bool requires_grad() const;

  Tape* tape() const { return tape_; }
  std::size_t id() const { return id_; }

 private:
  friend class Tape;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

// Reverse-mode recording of primitive operations. Nodes are appended in evaluation order,
// so inputs always precede their consumers. One backward pass per forward pass.
class Tape {
 public:
  // Called during backward with the node's own id; reads grad(self) and accumulates into
  // the inputs' gradients.
  using Backward = std::function<void(Tape&, std::size_t self)>;

  // In checked mode every recorded value must be finite (NumericError otherwise).
  explicit Tape(bool checked = false) : checked_(checked) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var leaf(Matrix value);
  Var constant(Matrix value);

  // Records the result of an operation. `backward` runs only when some input requires a
  // gradient.
  Var record(Matrix value, std::initializer_list<Var> inputs, const char* op, Backward backward);

  // Seeds d(output)/d(output) = 1 and propagates to every node.
  void backward(Var output);

  // Gradient of the last backward's output with respect to `v` (zeros if unreached).
  Matrix grad(Var v) const;

  const Matrix& value(std::size_t id) const { return nodes_[id].value; }
  const Matrix& upstream(std::size_t id) const { return nodes_[id].grad; }
  bool requires_grad(std::size_t id) const { return nodes_[id].requires_grad; }
  bool checked() const { return checked_; }
  std::size_t size() const { return nodes_.size(); }

  template <typename Derived>
  void accumulate(std::size_t id, const Eigen::MatrixBase<Derived>& g) {
    Node& node = nodes_[id];
    if (!node.requires_grad) return;
    if (node.has_grad) {
      node.grad += g;
    } else {
      node.grad = g;
      node.has_grad = true;
    }
  }

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    bool requires_grad = false;
    bool has_grad = false;
    Backward backward;
  };

  void check_finite(const Matrix& value, const char* op) const;

  std::deque<Node> nodes_;
  bool checked_ = false;
  bool backward_done_ = false;
};

}  // namespace joinrelax::tensor
