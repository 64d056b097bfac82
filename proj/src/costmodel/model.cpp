#include "joinrelax/costmodel/model.hpp"

#include <cmath>

#include "joinrelax/error.hpp"

namespace joinrelax::costmodel {

namespace {

Matrix uniform(Eigen::Index rows, Eigen::Index cols, double bound, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-bound, bound);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = dist(rng);
  return m;
}

void expect_shape(const Matrix& m, Eigen::Index rows, Eigen::Index cols, const std::string& name) {
  if (m.rows() != rows || m.cols() != cols) {
    throw StructuralError("parameter " + name + " has shape " + std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()) + ", expected " + std::to_string(rows) + "x" +
                          std::to_string(cols));
  }
}

}  // namespace

ModelParams ModelParams::init(const FeatureLayout& layout, std::size_t hidden, std::uint64_t seed) {
  if (hidden == 0) throw DomainError("hidden width must be positive");
  ModelParams p;
  p.layout = layout;
  p.hidden = hidden;
  std::mt19937_64 rng(seed);
  const auto f = static_cast<Eigen::Index>(layout.width());
  const auto h = static_cast<Eigen::Index>(hidden);
  const double bf = 1.0 / std::sqrt(static_cast<double>(f));
  const double bh = 1.0 / std::sqrt(static_cast<double>(h));
  p.w_proj = uniform(f, h, bf, rng);
  for (std::size_t l = 0; l < kGinLayers; ++l) {
    auto& g = p.gin[l];
    const Eigen::Index in = l == 0 ? f : h;
    const double bin = l == 0 ? bf : bh;
    g.eps = Matrix::Zero(1, 1);
    g.w1 = uniform(in, h, bin, rng);
    g.b1 = uniform(1, h, bin, rng);
    g.w2 = uniform(h, h, bh, rng);
    g.b2 = uniform(1, h, bh, rng);
    g.ln_gain = Matrix::Ones(1, h);
    g.ln_bias = Matrix::Zero(1, h);
  }
  p.head_w1 = uniform(h, h, bh, rng);
  p.head_b1 = uniform(1, h, bh, rng);
  p.head_w2 = uniform(h, 1, bh, rng);
  p.head_b2 = uniform(1, 1, bh, rng);
  return p;
}

std::vector<Matrix*> ModelParams::tensors() {
  std::vector<Matrix*> out{&w_proj};
  for (auto& g : gin) {
    for (Matrix* m : {&g.eps, &g.w1, &g.b1, &g.w2, &g.b2, &g.ln_gain, &g.ln_bias}) out.push_back(m);
  }
  for (Matrix* m : {&head_w1, &head_b1, &head_w2, &head_b2}) out.push_back(m);
  return out;
}

std::vector<const Matrix*> ModelParams::tensors() const {
  auto mut = const_cast<ModelParams*>(this)->tensors();
  return {mut.begin(), mut.end()};
}

std::vector<std::string> ModelParams::tensor_names() {
  std::vector<std::string> names{"w_proj"};
  for (std::size_t l = 1; l <= kGinLayers; ++l) {
    const std::string prefix = "gin" + std::to_string(l) + ".";
    for (const char* n : {"eps", "w1", "b1", "w2", "b2", "ln_gain", "ln_bias"}) names.push_back(prefix + n);
  }
  for (const char* n : {"head.w1", "head.b1", "head.w2", "head.b2"}) names.push_back(n);
  return names;
}

std::size_t ModelParams::parameter_count() const {
  std::size_t total = 0;
  for (const Matrix* m : tensors()) total += static_cast<std::size_t>(m->size());
  return total;
}

void ModelParams::validate() const {
  const auto f = static_cast<Eigen::Index>(layout.width());
  const auto h = static_cast<Eigen::Index>(hidden);
  expect_shape(w_proj, f, h, "w_proj");
  for (std::size_t l = 0; l < kGinLayers; ++l) {
    const auto& g = gin[l];
    const std::string prefix = "gin" + std::to_string(l + 1) + ".";
    expect_shape(g.eps, 1, 1, prefix + "eps");
    expect_shape(g.w1, l == 0 ? f : h, h, prefix + "w1");
    expect_shape(g.b1, 1, h, prefix + "b1");
    expect_shape(g.w2, h, h, prefix + "w2");
    expect_shape(g.b2, 1, h, prefix + "b2");
    expect_shape(g.ln_gain, 1, h, prefix + "ln_gain");
    expect_shape(g.ln_bias, 1, h, prefix + "ln_bias");
  }
  expect_shape(head_w1, h, h, "head.w1");
  expect_shape(head_b1, 1, h, "head.b1");
  expect_shape(head_w2, h, 1, "head.w2");
  expect_shape(head_b2, 1, 1, "head.b2");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw DomainError("dropout rate must be in [0,1)");
}

BoundParams bind(Tape& tape, const ModelParams& params, bool trainable) {
  BoundParams bound;
  for (const Matrix* m : params.tensors()) {
    bound.vars.push_back(trainable ? tape.leaf(*m) : tape.constant(*m));
  }
  return bound;
}

namespace {

void check_inputs(const ModelParams& params, const Matrix& x, const Matrix& a) {
  if (x.cols() != static_cast<Eigen::Index>(params.layout.width())) {
    throw StructuralError("feature width " + std::to_string(x.cols()) + " does not match model width " +
                          std::to_string(params.layout.width()));
  }
  if (a.rows() != a.cols() || a.rows() != x.rows()) {
    throw StructuralError("adjacency shape " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                          " does not match " + std::to_string(x.rows()) + " feature rows");
  }
}

}  // namespace

Var forward(const ModelParams& params, const BoundParams& bound, Var x, Var a, const ForwardOptions& options) {
  using namespace tensor;
  check_inputs(params, x.value(), a.value());
  const auto& v = bound.vars;
  if (v.size() != ModelParams::tensor_names().size()) throw StructuralError("bound parameter count mismatch");
  std::mt19937_64 fallback(0);
  std::mt19937_64& rng = options.rng ? *options.rng : fallback;
  const bool training = options.training && params.dropout > 0.0;
  if (training && !options.rng) throw StructuralError("training forward needs a random generator");

  // Σ_j a_ji h_j is row i of Aᵀ H.
  const Var at = transpose(a);
  auto gin_mlp = [&](std::size_t l, Var h) {
    const std::size_t base = 1 + 7 * l;
    const Var agg = add(add(h, scale_by(v[base], h)), matmul(at, h));
    const Var hidden = relu(add_row(matmul(agg, v[base + 1]), v[base + 2]));
    return add_row(matmul(hidden, v[base + 3]), v[base + 4]);
  };
  auto norm = [&](std::size_t l, Var z) {
    const std::size_t base = 1 + 7 * l;
    return layer_norm(z, v[base + 5], v[base + 6]);
  };

  const Var x1 = dropout(relu(norm(0, add(gin_mlp(0, x), matmul(x, v[0])))), params.dropout, training, rng);
  const Var x2 = dropout(relu(norm(1, add(gin_mlp(1, x1), x1))), params.dropout, training, rng);
  const Var x3 = relu(norm(2, add(gin_mlp(2, x2), x2)));

  const std::size_t head = 1 + 7 * kGinLayers;
  const Var pooled = sum_cols(x3);
  const Var g = dropout(relu(add_row(matmul(pooled, v[head]), v[head + 1])), params.dropout, training, rng);
  return abs(add_row(matmul(g, v[head + 2]), v[head + 3]));
}

namespace {

Matrix layer_norm_rows(const Matrix& z, const Matrix& gain, const Matrix& bias) {
  Matrix out(z.rows(), z.cols());
  const double width = static_cast<double>(z.cols());
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    const double mean = z.row(i).mean();
    const double var = (z.row(i).array() - mean).square().sum() / width;
    const double inv = 1.0 / std::sqrt(var + tensor::kLayerNormEpsilon);
    out.row(i) = ((z.row(i).array() - mean) * inv * gain.array() + bias.array()).matrix();
  }
  return out;
}

Matrix add_bias(Matrix m, const Matrix& row) {
  m.rowwise() += row.row(0);
  return m;
}

}  // namespace

double forward_value(const ModelParams& params, const Matrix& x, const Matrix& a) {
  check_inputs(params, x, a);
  auto mlp = [&](const GinLayerParams& g, const Matrix& h) -> Matrix {
    const Matrix agg = (1.0 + g.eps(0, 0)) * h + a.transpose() * h;
    const Matrix hidden = add_bias(agg * g.w1, g.b1).cwiseMax(0.0);
    return add_bias(hidden * g.w2, g.b2);
  };
  const auto& g = params.gin;
  const Matrix x1 = layer_norm_rows(mlp(g[0], x) + x * params.w_proj, g[0].ln_gain, g[0].ln_bias).cwiseMax(0.0);
  const Matrix x2 = layer_norm_rows(mlp(g[1], x1) + x1, g[1].ln_gain, g[1].ln_bias).cwiseMax(0.0);
  const Matrix x3 = layer_norm_rows(mlp(g[2], x2) + x2, g[2].ln_gain, g[2].ln_bias).cwiseMax(0.0);
  const Matrix pooled = x3.colwise().sum();
  const Matrix hidden = add_bias(pooled * params.head_w1, params.head_b1).cwiseMax(0.0);
  return std::abs((hidden * params.head_w2)(0, 0) + params.head_b2(0, 0));
}

double to_cost(const ModelParams& params, double output) {
  return params.log_target ? std::expm1(output) : output;
}

double to_target(const ModelParams& params, double cost) {
  return params.log_target ? std::log1p(cost) : cost;
}

double q_error(double predicted, double true_cost) {
  if (!(predicted > 0.0) || !(true_cost > 0.0)) {
    throw DomainError("q-error needs positive inputs, got " + std::to_string(predicted) + " and " +
                      std::to_string(true_cost));
  }
  return std::max(predicted / true_cost, true_cost / predicted);
}

double smoothed_q_error(double predicted, double true_cost) {
  return q_error(predicted + 1.0, true_cost + 1.0);
}

}  // namespace joinrelax::costmodel
