#include "joinrelax/tensor/ops.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "joinrelax/error.hpp"

namespace joinrelax::tensor {

namespace {

std::string shape(const Matrix& m) { return std::to_string(m.rows()) + "x" + std::to_string(m.cols()); }

void require_same_shape(Var a, Var b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw StructuralError(std::string(op) + ": shapes " + shape(a.value()) + " and " + shape(b.value()) +
                          " differ");
  }
}

Tape& tape_of(Var a) {
  if (a.tape() == nullptr) throw StructuralError("operand is not attached to a tape");
  return *a.tape();
}

}  // namespace

Var matmul(Var a, Var b) {
  if (a.cols() != b.rows()) {
    throw StructuralError("matmul: shapes " + shape(a.value()) + " and " + shape(b.value()) + " do not chain");
  }
  Matrix out;
  out.noalias() = a.value() * b.value();
  const std::size_t ia = a.id(), ib = b.id();
  return tape_of(a).record(std::move(out), {a, b}, "matmul", [ia, ib](Tape& t, std::size_t self) {
    const Matrix& g = t.upstream(self);
    if (t.requires_grad(ia)) t.accumulate(ia, g * t.value(ib).transpose());
    if (t.requires_grad(ib)) t.accumulate(ib, t.value(ia).transpose() * g);
  });
}

Var add(Var a, Var b) {
  require_same_shape(a, b, "add");
  const std::size_t ia = a.id(), ib = b.id();
  return tape_of(a).record(a.value() + b.value(), {a, b}, "add", [ia, ib](Tape& t, std::size_t self) {
    t.accumulate(ia, t.upstream(self));
    t.accumulate(ib, t.upstream(self));
  });
}

Var sub(Var a, Var b) {
  require_same_shape(a, b, "sub");
  const std::size_t ia = a.id(), ib = b.id();
  return tape_of(a).record(a.value() - b.value(), {a, b}, "sub", [ia, ib](Tape& t, std::size_t self) {
    t.accumulate(ia, t.upstream(self));
    t.accumulate(ib, -t.upstream(self));
  });
}

Var mul(Var a, Var b) {
  require_same_shape(a, b, "mul");
  const std::size_t ia = a.id(), ib = b.id();
  return tape_of(a).record(a.value().cwiseProduct(b.value()), {a, b}, "mul", [ia, ib](Tape& t, std::size_t self) {
    const Matrix& g = t.upstream(self);
    if (t.requires_grad(ia)) t.accumulate(ia, g.cwiseProduct(t.value(ib)));
    if (t.requires_grad(ib)) t.accumulate(ib, g.cwiseProduct(t.value(ia)));
  });
}

Var scale(Var a, double s) {
  const std::size_t ia = a.id();
  return tape_of(a).record(a.value() * s, {a}, "scale", [ia, s](Tape& t, std::size_t self) {
    t.accumulate(ia, t.upstream(self) * s);
  });
}

Var add_scalar(Var a, double s) {
  const std::size_t ia = a.id();
  return tape_of(a).record((a.value().array() + s).matrix(), {a}, "add_scalar",
                           [ia](Tape& t, std::size_t self) { t.accumulate(ia, t.upstream(self)); });
}

Var scale_by(Var s, Var a) {
  if (s.rows() != 1 || s.cols() != 1) throw StructuralError("scale_by: factor must be 1x1, got " + shape(s.value()));
  const std::size_t is = s.id(), ia = a.id();
  return tape_of(a).record(a.value() * s.scalar(), {s, a}, "scale_by", [is, ia](Tape& t, std::size_t self) {
    const Matrix& g = t.upstream(self);
    if (t.requires_grad(is)) t.accumulate(is, Matrix::Constant(1, 1, g.cwiseProduct(t.value(ia)).sum()));
    if (t.requires_grad(ia)) t.accumulate(ia, g * t.value(is)(0, 0));
  });
}

Var add_row(Var a, Var row) {
  if (row.rows() != 1 || row.cols() != a.cols()) {
    throw StructuralError("add_row: cannot broadcast " + shape(row.value()) + " over " + shape(a.value()));
  }
  const std::size_t ia = a.id(), ir = row.id();
  Matrix out = a.value();
  out.rowwise() += row.value().row(0);
  return tape_of(a).record(std::move(out), {a, row}, "add_row", [ia, ir](Tape& t, std::size_t self) {
    const Matrix& g = t.upstream(self);
    t.accumulate(ia, g);
    if (t.requires_grad(ir)) t.accumulate(ir, g.colwise().sum());
  });
}

Var transpose(Var a) {
  const std::size_t ia = a.id();
  return tape_of(a).record(a.value().transpose(), {a}, "transpose", [ia](Tape& t, std::size_t self) {
    t.accumulate(ia, t.upstream(self).transpose());
  });
}

Var slice(Var a, Eigen::Index row, Eigen::Index col, Eigen::Index rows, Eigen::Index cols) {
  if (row < 0 || col < 0 || rows < 0 || cols < 0 || row + rows > a.rows() || col + cols > a.cols()) {
    throw StructuralError("slice: block out of range of " + shape(a.value()));
  }
  const std::size_t ia = a.id();
  const Eigen::Index r_all = a.rows(), c_all = a.cols();
  return tape_of(a).record(a.value().block(row, col, rows, cols), {a}, "slice",
                           [ia, row, col, rows, cols, r_all, c_all](Tape& t, std::size_t self) {
                             Matrix g = Matrix::Zero(r_all, c_all);
                             g.block(row, col, rows, cols) = t.upstream(self);
                             t.accumulate(ia, g);
                           });
}

Var relu(Var a) {
  const std::size_t ia = a.id();
  return tape_of(a).record(a.value().cwiseMax(0.0), {a}, "relu", [ia](Tape& t, std::size_t self) {
    const Matrix& x = t.value(ia);
    t.accumulate(ia, t.upstream(self).cwiseProduct((x.array() > 0.0).cast<double>().matrix()));
  });
}

Var abs(Var a) {
  const std::size_t ia = a.id();
  return tape_of(a).record(a.value().cwiseAbs(), {a}, "abs", [ia](Tape& t, std::size_t self) {
    const Matrix& x = t.value(ia);
    t.accumulate(ia, t.upstream(self).cwiseProduct(x.cwiseSign()));
  });
}

Var square(Var a) {
  const std::size_t ia = a.id();
  return tape_of(a).record(a.value().cwiseAbs2(), {a}, "square", [ia](Tape& t, std::size_t self) {
    t.accumulate(ia, 2.0 * t.upstream(self).cwiseProduct(t.value(ia)));
  });
}

Var row_softmax(Var a, const Mask* mask) {
  const Matrix& x = a.value();
  if (mask != nullptr && (mask->rows() != x.rows() || mask->cols() != x.cols())) {
    throw StructuralError("row_softmax: mask shape does not match " + shape(x));
  }
  Matrix out = Matrix::Zero(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    double hi = -std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      if (mask == nullptr || !(*mask)(i, j)) hi = std::max(hi, x(i, j));
    }
    if (hi == -std::numeric_limits<double>::infinity()) continue;  // fully masked row
    double total = 0.0;
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      if (mask == nullptr || !(*mask)(i, j)) total += out(i, j) = std::exp(x(i, j) - hi);
    }
    out.row(i) /= total;
  }
  const std::size_t ia = a.id();
  Matrix saved = out;
  return tape_of(a).record(std::move(out), {a}, "row_softmax", [ia, s = std::move(saved)](Tape& t, std::size_t self) {
    const Matrix& g = t.upstream(self);
    const Eigen::VectorXd dot = s.cwiseProduct(g).rowwise().sum();
    Matrix dx = s.cwiseProduct(g);
    for (Eigen::Index i = 0; i < s.rows(); ++i) dx.row(i) -= dot(i) * s.row(i);
    t.accumulate(ia, dx);
  });
}

Var layer_norm(Var x, Var gain, Var bias, double eps) {
  const Eigen::Index c = x.cols();
  if (gain.rows() != 1 || gain.cols() != c || bias.rows() != 1 || bias.cols() != c) {
    throw StructuralError("layer_norm: gain/bias must be 1x" + std::to_string(c));
  }
  const Matrix& xv = x.value();
  Matrix xhat(xv.rows(), c);
  Eigen::VectorXd inv_std(xv.rows());
  for (Eigen::Index i = 0; i < xv.rows(); ++i) {
    const double mean = xv.row(i).mean();
    const double var = (xv.row(i).array() - mean).square().mean();
    inv_std(i) = 1.0 / std::sqrt(var + eps);
    xhat.row(i) = (xv.row(i).array() - mean) * inv_std(i);
  }
  Matrix out = xhat;
  out.array().rowwise() *= gain.value().row(0).array();
  out.rowwise() += bias.value().row(0);
  const std::size_t ix = x.id(), ig = gain.id(), ib = bias.id();
  return tape_of(x).record(std::move(out), {x, gain, bias}, "layer_norm",
                           [ix, ig, ib, xhat = std::move(xhat), inv_std = std::move(inv_std)](Tape& t, std::size_t self) {
                             const Matrix& g = t.upstream(self);
                             if (t.requires_grad(ig)) t.accumulate(ig, g.cwiseProduct(xhat).colwise().sum());
                             if (t.requires_grad(ib)) t.accumulate(ib, g.colwise().sum());
                             if (!t.requires_grad(ix)) return;
                             Matrix dxhat = g;
                             dxhat.array().rowwise() *= t.value(ig).row(0).array();
                             const auto cols = static_cast<double>(g.cols());
                             Matrix dx(g.rows(), g.cols());
                             for (Eigen::Index i = 0; i < g.rows(); ++i) {
                               const double m1 = dxhat.row(i).sum() / cols;
                               const double m2 = dxhat.row(i).dot(xhat.row(i)) / cols;
                               dx.row(i) = inv_std(i) * (dxhat.row(i).array() - m1 - xhat.row(i).array() * m2).matrix();
                             }
                             t.accumulate(ix, dx);
                           });
}

Var dropout(Var a, double rate, bool training, std::mt19937_64& rng) {
  if (rate < 0.0 || rate >= 1.0) throw DomainError("dropout rate must lie in [0, 1)");
  if (!training || rate == 0.0) return a;
  std::bernoulli_distribution keep(1.0 - rate);
  Matrix mask(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < mask.size(); ++i) mask.data()[i] = keep(rng) ? 1.0 / (1.0 - rate) : 0.0;
  Var m = tape_of(a).constant(std::move(mask));
  return mul(a, m);
}

Var sum_all(Var a) {
  const std::size_t ia = a.id();
  const Eigen::Index r = a.rows(), c = a.cols();
  return tape_of(a).record(Matrix::Constant(1, 1, a.value().sum()), {a}, "sum_all", [ia, r, c](Tape& t, std::size_t self) {
    t.accumulate(ia, Matrix::Constant(r, c, t.upstream(self)(0, 0)));
  });
}

Var sum_rows(Var a) {
  const std::size_t ia = a.id();
  const Eigen::Index c = a.cols();
  return tape_of(a).record(a.value().rowwise().sum(), {a}, "sum_rows", [ia, c](Tape& t, std::size_t self) {
    t.accumulate(ia, t.upstream(self).replicate(1, c));
  });
}

Var sum_cols(Var a) {
  const std::size_t ia = a.id();
  const Eigen::Index r = a.rows();
  return tape_of(a).record(a.value().colwise().sum(), {a}, "sum_cols", [ia, r](Tape& t, std::size_t self) {
    t.accumulate(ia, t.upstream(self).replicate(r, 1));
  });
}

namespace {

constexpr int kMaxSeriesTerms = 200;
constexpr double kNegligibleTerm = 1e-20;

// Returns the number of terms K and fills `partial` with sum_{k<K} A^k/k!.
int expm_series(const Matrix& a, double& trace, Matrix& partial) {
  const Eigen::Index n = a.rows();
  Matrix term = Matrix::Identity(n, n);
  partial = Matrix::Zero(n, n);
  trace = 0.0;
  int k = 0;
  while (true) {
    // term == A^k / k!
    trace += term.trace();
    if (k >= std::max<Eigen::Index>(n, 1) && (term.cwiseAbs().maxCoeff() <= kNegligibleTerm || k >= kMaxSeriesTerms)) {
      return k;
    }
    partial += term;
    Matrix next;
    next.noalias() = term * a;
    term = next / static_cast<double>(k + 1);
    ++k;
  }
}

}  // namespace

TraceExpmSeries trace_expm_value(const Matrix& a) {
  if (a.rows() != a.cols()) throw StructuralError("trace_expm: matrix " + shape(a) + " is not square");
  TraceExpmSeries s;
  Matrix partial;
  s.terms = expm_series(a, s.trace, partial);
  return s;
}

Var trace_expm(Var a) {
  if (a.rows() != a.cols()) throw StructuralError("trace_expm: matrix " + shape(a.value()) + " is not square");
  double trace = 0.0;
  Matrix partial;
  expm_series(a.value(), trace, partial);
  const std::size_t ia = a.id();
  return tape_of(a).record(Matrix::Constant(1, 1, trace), {a}, "trace_expm",
                           [ia, partial = std::move(partial)](Tape& t, std::size_t self) {
                             t.accumulate(ia, partial.transpose() * t.upstream(self)(0, 0));
                           });
}

}  // namespace joinrelax::tensor
