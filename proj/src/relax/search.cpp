#include "joinrelax/relax/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <future>
#include <optional>

#include "joinrelax/error.hpp"
#include "joinrelax/plan/matrix.hpp"
#include "joinrelax/plan/projection.hpp"
#include "joinrelax/random.hpp"
#include "joinrelax/relax/penalties.hpp"
#include "joinrelax/tensor/adam.hpp"

namespace joinrelax::relax {

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

Matrix noiseless_adjacency(const Matrix& logits, double tau, const Mask& mask) {
  Tape tape;
  const Var l = tape.constant(logits);
  return tensor::row_softmax(tensor::scale(l, 1.0 / tau), &mask).value();
}

SearchResult optimize(const costmodel::ModelParams& model, const Matrix& x, const SearchConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  if (x.rows() < 3 || x.rows() % 2 == 0) {
    throw StructuralError("search needs N = 2n-1 >= 3 feature rows, got " + std::to_string(x.rows()));
  }
  const auto n = static_cast<std::size_t>((x.rows() + 1) / 2);
  const Mask mask = logit_mask(n, config);
  const PenaltyWeights weights = config.effective_weights();

  std::mt19937_64 init_rng(config.seed);
  std::mt19937_64 noise_rng(splitmix64(config.seed ^ 0x67756d62656cULL));
  Matrix logits = init_logits(n, mask, config.init_range, init_rng);

  tensor::Adam adamw({&logits}, {.learning_rate = config.learning_rate, .weight_decay = config.weight_decay});
  const Mask trainable = mask.unaryExpr([](bool forbidden) { return !forbidden; });
  const std::vector<const Mask*> masks{&trainable};

  SearchResult result;
  result.seed = config.seed;
  result.best_logits = logits;
  result.trace.reserve(config.iterations);

  for (std::size_t t = 0; t < config.iterations; ++t) {
    const double tau = anneal_temperature(t, config);
    const double lambda_t = penalty_ramp(t, config);
    const Matrix noise = sample_gumbel(logits.rows(), logits.cols(), noise_rng);

    Tape tape;
    const Var l = tape.leaf(logits);
    const Var a = gumbel_softmax(l, noise, tau, mask);
    const costmodel::BoundParams bound = costmodel::bind(tape, model, false);
    const Var cost = costmodel::forward(model, bound, tape.constant(x), a);
    const Var p_struct = structural_penalty(all_penalties(a, n), weights);
    const Var loss = total_loss(cost, p_struct, t, config);

    TraceRecord record{t, tau, lambda_t, cost.scalar(), p_struct.scalar(), false};
    if (!std::isfinite(loss.scalar())) throw SearchError("non-finite loss at iteration " + std::to_string(t));

    if (record.cost < result.best_cost && record.p_struct < config.gamma) {
      // Retain the logits that produced ĉ, before this step's update.
      result.best_cost = record.cost;
      result.best_logits = logits;
      result.retained_any = true;
      record.retained = true;
    }

    tape.backward(loss);
    adamw.step({tape.grad(l)}, masks);
    result.trace.push_back(record);
  }

  const Matrix& source = result.retained_any ? result.best_logits : logits;
  Matrix soft = noiseless_adjacency(source, config.tau_min, mask);
  soft.row(soft.rows() - 1).setZero();
  result.projected_from = soft;
  result.plan = project_discrete(soft);
  result.plan_output = costmodel::forward_value(model, x, encode(result.plan));
  result.plan_cost = costmodel::to_cost(model, result.plan_output);
  result.wall_clock_ms = elapsed_ms(start);
  return result;
}

MultiSearchResult optimize_multi(const costmodel::ModelParams& model, const Matrix& x, const SearchConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  auto front_config = [&](std::size_t i) {
    SearchConfig c = config;
    c.seed = front_seed(config.seed, i);
    c.fronts = 1;
    return c;
  };

  std::vector<std::optional<SearchResult>> runs(config.fronts);
  std::vector<std::exception_ptr> errors(config.fronts);
  auto run = [&](std::size_t i) {
    try {
      runs[i] = optimize(model, x, front_config(i));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  if (config.threads <= 1 || config.fronts == 1) {
    for (std::size_t i = 0; i < config.fronts; ++i) run(i);
  } else {
    for (std::size_t begin = 0; begin < config.fronts; begin += config.threads) {
      std::vector<std::future<void>> batch;
      for (std::size_t i = begin; i < std::min(config.fronts, begin + config.threads); ++i) {
        batch.push_back(std::async(std::launch::async, run, i));
      }
      for (auto& f : batch) f.get();
    }
  }

  MultiSearchResult out;
  std::exception_ptr first_error;
  for (std::size_t i = 0; i < config.fronts; ++i) {
    if (runs[i]) {
      out.fronts.push_back(std::move(*runs[i]));
    } else if (!first_error) {
      first_error = errors[i];
    }
  }
  if (out.fronts.empty()) std::rethrow_exception(first_error);
  for (std::size_t i = 1; i < out.fronts.size(); ++i) {
    if (out.fronts[i].plan_output < out.fronts[out.best_front].plan_output) out.best_front = i;
  }
  out.wall_clock_ms = elapsed_ms(start);
  return out;
}

}  // namespace joinrelax::relax
