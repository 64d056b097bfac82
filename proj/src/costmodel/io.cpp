#include "joinrelax/costmodel/io.hpp"

#include <json.hpp>

#include "joinrelax/error.hpp"
#include "joinrelax/storage/io.hpp"

namespace joinrelax::costmodel {

std::string model_to_json(const ModelParams& params) {
  params.validate();
  nlohmann::ordered_json doc;
  doc["format_version"] = kModelFormatVersion;
  doc["d_e"] = params.layout.embedding_dim;
  doc["embedding_seed"] = params.layout.embedding_seed;
  doc["H"] = params.hidden;
  doc["F"] = params.layout.width();
  doc["dropout"] = params.dropout;
  doc["log_target"] = params.log_target;
  auto tensors = nlohmann::ordered_json::object();
  const auto names = ModelParams::tensor_names();
  const auto values = params.tensors();
  for (std::size_t k = 0; k < names.size(); ++k) {
    const Matrix& m = *values[k];
    std::vector<double> data(m.data(), m.data() + m.size());
    tensors[names[k]] = {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
  }
  doc["tensors"] = std::move(tensors);
  return doc.dump(1);
}

ModelParams model_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    const int version = doc.at("format_version").get<int>();
    if (version != kModelFormatVersion) {
      throw FormatError("unsupported model format version " + std::to_string(version));
    }
    ModelParams p;
    p.layout.embedding_dim = doc.at("d_e").get<std::size_t>();
    p.layout.embedding_seed = doc.at("embedding_seed").get<std::uint64_t>();
    p.hidden = doc.at("H").get<std::size_t>();
    p.dropout = doc.at("dropout").get<double>();
    p.log_target = doc.at("log_target").get<bool>();
    const auto f = doc.at("F").get<std::size_t>();
    if (f != p.layout.width()) {
      throw FormatError("model F=" + std::to_string(f) + " inconsistent with d_e=" +
                        std::to_string(p.layout.embedding_dim));
    }
    const auto& tensors = doc.at("tensors");
    const auto names = ModelParams::tensor_names();
    auto slots = p.tensors();
    for (std::size_t k = 0; k < names.size(); ++k) {
      const auto& t = tensors.at(names[k]);
      const auto rows = t.at("rows").get<Eigen::Index>();
      const auto cols = t.at("cols").get<Eigen::Index>();
      const auto data = t.at("data").get<std::vector<double>>();
      if (rows < 0 || cols < 0 || static_cast<std::size_t>(rows * cols) != data.size()) {
        throw FormatError("tensor " + names[k] + " data length does not match its shape");
      }
      Matrix m(rows, cols);
      std::copy(data.begin(), data.end(), m.data());
      *slots[k] = std::move(m);
    }
    try {
      p.validate();
    } catch (const StructuralError& e) {
      throw FormatError(std::string("model file shapes are inconsistent: ") + e.what());
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed model file: ") + e.what());
  }
}

void save_model(const std::filesystem::path& path, const ModelParams& params) {
  write_file(path, model_to_json(params));
}

ModelParams load_model(const std::filesystem::path& path) { return model_from_json(read_file(path)); }

}  // namespace joinrelax::costmodel
