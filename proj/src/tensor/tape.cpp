#include "joinrelax/tensor/tape.hpp"

#include "joinrelax/error.hpp"

namespace joinrelax::tensor {

const Matrix& Var::value() const {
  if (tape_ == nullptr) throw StructuralError("variable is not attached to a tape");
  return tape_->value(id_);
}

double Var::scalar() const {
  const Matrix& v = value();
  if (v.rows() != 1 || v.cols() != 1) {
    throw StructuralError("scalar() on a " + std::to_string(v.rows()) + "x" + std::to_string(v.cols()) + " tensor");
  }
  return v(0, 0);
}

bool Var::requires_grad() const { return tape_ != nullptr && tape_->requires_grad(id_); }

void Tape::check_finite(const Matrix& value, const char* op) const {
  if (checked_ && !value.allFinite()) throw NumericError(std::string("non-finite value produced by ") + op);
}

Var Tape::leaf(Matrix value) {
  check_finite(value, "leaf");
  nodes_.push_back({std::move(value), {}, true, false, {}});
  return {this, nodes_.size() - 1};
}

Var Tape::constant(Matrix value) {
  check_finite(value, "constant");
  nodes_.push_back({std::move(value), {}, false, false, {}});
  return {this, nodes_.size() - 1};
}

Var Tape::record(Matrix value, std::initializer_list<Var> inputs, const char* op, Backward backward) {
  bool needs = false;
  for (const Var& in : inputs) {
    if (in.tape() != this) throw StructuralError(std::string(op) + ": operand belongs to another tape");
    needs = needs || nodes_[in.id()].requires_grad;
  }
  check_finite(value, op);
  nodes_.push_back({std::move(value), {}, needs, false, needs ? std::move(backward) : Backward{}});
  return {this, nodes_.size() - 1};
}

void Tape::backward(Var output) {
  if (output.tape() != this) throw StructuralError("backward: output belongs to another tape");
  const Matrix& out = nodes_[output.id()].value;
  if (out.rows() != 1 || out.cols() != 1) {
    throw StructuralError("backward needs a scalar output, got " + std::to_string(out.rows()) + "x" +
                          std::to_string(out.cols()));
  }
  if (backward_done_) throw StructuralError("backward already ran on this tape");
  backward_done_ = true;
  accumulate(output.id(), Matrix::Ones(1, 1));
  for (std::size_t i = output.id() + 1; i-- > 0;) {
    Node& node = nodes_[i];
    if (node.has_grad && node.backward) node.backward(*this, i);
  }
}

Matrix Tape::grad(Var v) const {
  const Node& node = nodes_[v.id()];
  if (node.has_grad) return node.grad;
  return Matrix::Zero(node.value.rows(), node.value.cols());
}

}  // namespace joinrelax::tensor
