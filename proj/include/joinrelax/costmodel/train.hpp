#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "joinrelax/costmodel/model.hpp"

namespace joinrelax::costmodel {

struct TrainingExample {
  std::string query_id;  // examples sharing a query id land in the same split
  Matrix x;
  Matrix a;
  double target = 0.0;  // C_out
};

struct TrainConfig {
  std::size_t epochs = 60;
  std::size_t batch_size = 64;
  double learning_rate = 2e-3;
  double dropout = 0.1;
  std::size_t hidden = 64;
  std::uint64_t seed = 7;
  double validation_fraction = 0.1;
  bool log_target = true;
  FeatureLayout layout;

  void validate() const;
};

struct EpochMetrics {
  std::size_t epoch = 0;
  double train_mse = 0.0;
  double validation_median_q_error = 0.0;
};

struct TrainingReport {
  std::vector<EpochMetrics> epochs;
  std::size_t best_epoch = 0;
  double best_validation_median_q_error = 0.0;
  std::size_t train_size = 0;
  std::size_t validation_size = 0;
};

struct TrainResult {
  ModelParams params;
  TrainingReport report;
};

using EpochCallback = std::function<void(const EpochMetrics&)>;

TrainResult train(const std::vector<TrainingExample>& dataset, const TrainConfig& config,
                  const EpochCallback& on_epoch = {});

// Deterministic split of example indices into (train, validation), grouped by query id.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_dataset(
    const std::vector<TrainingExample>& dataset, double validation_fraction, std::uint64_t seed);

// Smoothed Q-errors of the model on the selected examples, in C_out units.
std::vector<double> evaluate_q_errors(const ModelParams& params, const std::vector<TrainingExample>& dataset,
                                      const std::vector<std::size_t>& indices);

double median(std::vector<double> values);

}  // namespace joinrelax::costmodel
