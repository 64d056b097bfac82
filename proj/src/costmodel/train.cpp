#include "joinrelax/costmodel/train.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "joinrelax/error.hpp"
#include "joinrelax/tensor/adam.hpp"

namespace joinrelax::costmodel {

void TrainConfig::validate() const {
  if (epochs == 0) throw DomainError("epochs must be positive");
  if (batch_size == 0) throw DomainError("batch size must be positive");
  if (!(learning_rate > 0.0)) throw DomainError("learning rate must be positive");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw DomainError("dropout rate must be in [0,1)");
  if (hidden == 0) throw DomainError("hidden width must be positive");
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) {
    throw DomainError("validation fraction must be in (0,1)");
  }
  if (layout.embedding_dim == 0) throw DomainError("embedding dimension must be positive");
}

double median(std::vector<double> values) {
  if (values.empty()) throw DomainError("median of an empty sample");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_dataset(
    const std::vector<TrainingExample>& dataset, double validation_fraction, std::uint64_t seed) {
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const std::string key = dataset[i].query_id.empty() ? "#" + std::to_string(i) : dataset[i].query_id;
    groups[key].push_back(i);
  }
  std::vector<const std::vector<std::size_t>*> order;
  for (const auto& [key, members] : groups) order.push_back(&members);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  const auto wanted = static_cast<std::size_t>(std::ceil(validation_fraction * static_cast<double>(dataset.size())));
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
  for (const auto* members : order) {
    // Keep at least one group for training.
    const bool to_validation = validation.size() < wanted && members != order.back();
    auto& target = to_validation ? validation : train;
    target.insert(target.end(), members->begin(), members->end());
  }
  if (validation.empty()) {
    // Single group: fall back to an example-level split.
    std::vector<std::size_t> all(train);
    std::shuffle(all.begin(), all.end(), rng);
    const std::size_t k = std::clamp<std::size_t>(wanted, 1, all.size() > 1 ? all.size() - 1 : 1);
    validation.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k));
    train.assign(all.begin() + static_cast<std::ptrdiff_t>(k), all.end());
    if (train.empty()) train = validation;
  }
  std::sort(train.begin(), train.end());
  std::sort(validation.begin(), validation.end());
  return {train, validation};
}

std::vector<double> evaluate_q_errors(const ModelParams& params, const std::vector<TrainingExample>& dataset,
                                      const std::vector<std::size_t>& indices) {
  std::vector<double> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) {
    const auto& ex = dataset[i];
    const double predicted = std::max(0.0, to_cost(params, forward_value(params, ex.x, ex.a)));
    out.push_back(smoothed_q_error(predicted, ex.target));
  }
  return out;
}

TrainResult train(const std::vector<TrainingExample>& dataset, const TrainConfig& config,
                  const EpochCallback& on_epoch) {
  config.validate();
  if (dataset.empty()) throw DomainError("training dataset is empty");
  for (const auto& ex : dataset) {
    if (!(ex.target >= 0.0) || !std::isfinite(ex.target)) throw DomainError("training targets must be finite and >= 0");
  }

  ModelParams params = ModelParams::init(config.layout, config.hidden, config.seed);
  params.dropout = config.dropout;
  params.log_target = config.log_target;
  params.validate();

  auto [train_idx, val_idx] = split_dataset(dataset, config.validation_fraction, config.seed);

  // Start the output bias at the mean training target.
  double mean_target = 0.0;
  for (std::size_t i : train_idx) mean_target += to_target(params, dataset[i].target);
  params.head_b2(0, 0) = mean_target / static_cast<double>(train_idx.size());

  tensor::Adam adam(params.tensors(), {.learning_rate = config.learning_rate});
  std::mt19937_64 rng(config.seed ^ 0x5eedULL);

  TrainResult result{params, {}};
  result.report.train_size = train_idx.size();
  result.report.validation_size = val_idx.size();
  bool have_best = false;

  std::vector<std::size_t> order = train_idx;
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    std::size_t batch_index = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size, ++batch_index) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      Tape tape;
      const BoundParams bound = bind(tape, params, true);
      std::vector<Var> losses;
      for (std::size_t k = start; k < end; ++k) {
        const auto& ex = dataset[order[k]];
        const Var out = forward(params, bound, tape.constant(ex.x), tape.constant(ex.a),
                                {.training = true, .rng = &rng});
        losses.push_back(tensor::square(tensor::add_scalar(out, -to_target(params, ex.target))));
      }
      Var total = losses.front();
      for (std::size_t k = 1; k < losses.size(); ++k) total = tensor::add(total, losses[k]);
      const double batch_sum = total.scalar();
      if (!std::isfinite(batch_sum)) {
        throw TrainingError("non-finite loss at epoch " + std::to_string(epoch) + ", batch " +
                            std::to_string(batch_index));
      }
      loss_sum += batch_sum;
      const Var mean = tensor::scale(total, 1.0 / static_cast<double>(losses.size()));
      tape.backward(mean);
      std::vector<Matrix> grads;
      grads.reserve(bound.vars.size());
      for (const Var& v : bound.vars) grads.push_back(tape.grad(v));
      adam.step(grads);
    }

    EpochMetrics metrics;
    metrics.epoch = epoch;
    metrics.train_mse = loss_sum / static_cast<double>(order.size());
    metrics.validation_median_q_error = median(evaluate_q_errors(params, dataset, val_idx));
    if (!std::isfinite(metrics.validation_median_q_error)) {
      throw TrainingError("non-finite validation q-error at epoch " + std::to_string(epoch));
    }
    result.report.epochs.push_back(metrics);
    if (!have_best || metrics.validation_median_q_error < result.report.best_validation_median_q_error) {
      have_best = true;
      result.params = params;
      result.report.best_epoch = epoch;
      result.report.best_validation_median_q_error = metrics.validation_median_q_error;
    }
    if (on_epoch) on_epoch(metrics);
  }
  return result;
}

}  // namespace joinrelax::costmodel
