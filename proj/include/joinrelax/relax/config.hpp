#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace joinrelax::relax {

struct PenaltyWeights {
  double to = 2000.0;
  double ji = 2000.0;
  double jo = 2000.0;
  double ll = 2000.0;
  double acyc = 2000.0;

  bool operator==(const PenaltyWeights&) const = default;
};

struct SearchConfig {
  std::size_t iterations = 1000;  // I
  double learning_rate = 1.5;     // α
  double tau0 = 5.0;
  double tau_min = 1.0;
  double q = 7.0;
  double lambda_max = 2.6;
  double gamma = 5.0;
  PenaltyWeights weights;
  std::size_t fronts = 1;  // k
  std::uint64_t seed = 1;
  bool left_linear = true;  // false: bushy mode, λ_LL treated as 0
  bool mask_pattern_columns = true;
  bool mask_root_row = true;  // root row held at zero during the loop
  double init_range = 0.05;
  double weight_decay = 0.0;
  std::size_t threads = 1;  // fronts run concurrently when > 1

  void validate() const;
  PenaltyWeights effective_weights() const;

  bool operator==(const SearchConfig&) const = default;
};

// "defaults", "LUBM-Star", "LUBM-Path", "Wikidata-Star", "Wikidata-Path".
SearchConfig profile(std::string_view name);
std::vector<std::string> profile_names();

// JSON object; an optional "profile" key selects the base, other keys override it.
SearchConfig config_from_json(const std::string& text, const SearchConfig& base = {});
std::string config_to_json(const SearchConfig& config);

double anneal_temperature(std::size_t t, const SearchConfig& config);
double penalty_ramp(std::size_t t, const SearchConfig& config);  // λ(t)

}  // namespace joinrelax::relax
