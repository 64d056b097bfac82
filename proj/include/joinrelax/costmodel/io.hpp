#pragma once

#include <filesystem>
#include <string>

#include "joinrelax/costmodel/model.hpp"

namespace joinrelax::costmodel {

inline constexpr int kModelFormatVersion = 1;

// JSON dump of all parameter tensors with shape headers and the feature-layout constants.
std::string model_to_json(const ModelParams& params);
ModelParams model_from_json(const std::string& text);

void save_model(const std::filesystem::path& path, const ModelParams& params);
ModelParams load_model(const std::filesystem::path& path);

}  // namespace joinrelax::costmodel
