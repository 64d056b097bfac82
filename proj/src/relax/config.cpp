#include "joinrelax/relax/config.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "joinrelax/error.hpp"

namespace joinrelax::relax {

void SearchConfig::validate() const {
  if (iterations < 1) throw DomainError("iterations must be >= 1");
  if (!(learning_rate > 0.0)) throw DomainError("learning rate must be positive");
  if (!(tau_min > 0.0) || !(tau0 >= tau_min)) throw DomainError("temperatures need tau0 >= tau_min > 0");
  if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
  if (fronts < 1) throw DomainError("fronts must be >= 1");
  if (!(q >= 0.0) || !(lambda_max >= 0.0)) throw DomainError("q and lambda_max must be nonnegative");
  for (double w : {weights.to, weights.ji, weights.jo, weights.ll, weights.acyc}) {
    if (!(w >= 0.0)) throw DomainError("penalty weights must be nonnegative");
  }
  if (!(init_range >= 0.0)) throw DomainError("init range must be nonnegative");
  if (!(weight_decay >= 0.0)) throw DomainError("weight decay must be nonnegative");
  if (threads < 1) throw DomainError("threads must be >= 1");
}

PenaltyWeights SearchConfig::effective_weights() const {
  PenaltyWeights w = weights;
  if (!left_linear) w.ll = 0.0;
  return w;
}

namespace {

struct Column {
  const char* name;
  std::size_t iterations;
  double alpha, acyc, to, ji, jo, ll, q, gamma, tau0, lambda_max;
};

constexpr Column kTable[] = {
    {"LUBM-Star", 500, 1.7, 3081, 135, 1742, 1558, 2300, 6.5, 5, 4.5, 2.6},
    {"LUBM-Path", 1000, 1.8, 4415, 790, 2197, 2204, 1910, 6.8, 8.6, 3.7, 4.2},
    {"Wikidata-Star", 1000, 1.0, 3391, 2026, 2150, 1295, 2157, 5.3, 3, 15, 0.7},
    {"Wikidata-Path", 1000, 0.5, 467, 3661, 1919, 1900, 759, 7, 0.5, 5, 1.8},
};

}  // namespace

std::vector<std::string> profile_names() {
  std::vector<std::string> names{"defaults"};
  for (const auto& c : kTable) names.emplace_back(c.name);
  return names;
}

SearchConfig profile(std::string_view name) {
  SearchConfig config;
  if (name == "defaults") return config;
  for (const auto& c : kTable) {
    if (name != c.name) continue;
    config.iterations = c.iterations;
    config.learning_rate = c.alpha;
    config.weights = {c.to, c.ji, c.jo, c.ll, c.acyc};
    config.q = c.q;
    config.gamma = c.gamma;
    config.tau0 = c.tau0;
    config.lambda_max = c.lambda_max;
    return config;
  }
  throw DomainError("unknown search profile '" + std::string(name) + "'");
}

SearchConfig config_from_json(const std::string& text, const SearchConfig& base) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("search config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw FormatError("search config must be a JSON object");
  SearchConfig c = doc.contains("profile") ? profile(doc["profile"].get<std::string>()) : base;
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "profile") continue;
      else if (key == "iterations") c.iterations = value.get<std::size_t>();
      else if (key == "alpha") c.learning_rate = value.get<double>();
      else if (key == "tau0") c.tau0 = value.get<double>();
      else if (key == "tau_min") c.tau_min = value.get<double>();
      else if (key == "q") c.q = value.get<double>();
      else if (key == "lambda_max") c.lambda_max = value.get<double>();
      else if (key == "gamma") c.gamma = value.get<double>();
      else if (key == "fronts") c.fronts = value.get<std::size_t>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "left_linear") c.left_linear = value.get<bool>();
      else if (key == "mask_pattern_columns") c.mask_pattern_columns = value.get<bool>();
      else if (key == "mask_root_row") c.mask_root_row = value.get<bool>();
      else if (key == "init_range") c.init_range = value.get<double>();
      else if (key == "weight_decay") c.weight_decay = value.get<double>();
      else if (key == "threads") c.threads = value.get<std::size_t>();
      else if (key == "weights") {
        for (const auto& [wk, wv] : value.items()) {
          const double w = wv.get<double>();
          if (wk == "to") c.weights.to = w;
          else if (wk == "ji") c.weights.ji = w;
          else if (wk == "jo") c.weights.jo = w;
          else if (wk == "ll") c.weights.ll = w;
          else if (wk == "acyc") c.weights.acyc = w;
          else throw FormatError("unknown penalty weight '" + wk + "'");
        }
      } else {
        throw FormatError("unknown search config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed search config: ") + e.what());
  }
  c.validate();
  return c;
}

std::string config_to_json(const SearchConfig& c) {
  nlohmann::ordered_json doc;
  doc["iterations"] = c.iterations;
  doc["alpha"] = c.learning_rate;
  doc["tau0"] = c.tau0;
  doc["tau_min"] = c.tau_min;
  doc["q"] = c.q;
  doc["lambda_max"] = c.lambda_max;
  doc["gamma"] = c.gamma;
  doc["weights"] = {{"to", c.weights.to}, {"ji", c.weights.ji}, {"jo", c.weights.jo},
                    {"ll", c.weights.ll}, {"acyc", c.weights.acyc}};
  doc["fronts"] = c.fronts;
  doc["seed"] = c.seed;
  doc["left_linear"] = c.left_linear;
  doc["mask_pattern_columns"] = c.mask_pattern_columns;
  doc["mask_root_row"] = c.mask_root_row;
  doc["init_range"] = c.init_range;
  doc["weight_decay"] = c.weight_decay;
  doc["threads"] = c.threads;
  return doc.dump(2);
}

double anneal_temperature(std::size_t t, const SearchConfig& c) {
  const double frac = static_cast<double>(t) / static_cast<double>(c.iterations);
  return std::max(c.tau_min, c.tau0 - frac * (c.tau0 - c.tau_min));
}

double penalty_ramp(std::size_t t, const SearchConfig& c) {
  const double frac = static_cast<double>(t) / static_cast<double>(c.iterations);
  return c.lambda_max * std::pow(frac, c.q);
}

}  // namespace joinrelax::relax
