#include "joinrelax/workbench/provenance.hpp"

#include <cstdio>
#include <json.hpp>

#include "joinrelax/random.hpp"
#include "joinrelax/storage/io.hpp"

namespace joinrelax::workbench {

namespace fs = std::filesystem;

std::string file_hash(const fs::path& path) {
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(fnv1a(read_file(path))));
  return buffer;
}

void write_provenance(const Provenance& record) {
  nlohmann::ordered_json doc;
  doc["command"] = record.command;
  doc["seed"] = record.seed;
  doc["config"] = nlohmann::ordered_json::parse(record.config_json.empty() ? "{}" : record.config_json);
  auto hashes = [](const std::vector<fs::path>& paths) {
    auto out = nlohmann::ordered_json::array();
    for (const auto& p : paths) {
      if (fs::is_regular_file(p)) {
        out.push_back({{"path", p.filename().string()}, {"fnv1a64", file_hash(p)}});
      } else {
        out.push_back({{"path", p.filename().string()}});
      }
    }
    return out;
  };
  doc["inputs"] = hashes(record.inputs);
  doc["outputs"] = hashes(record.outputs);
  if (!record.timing_note.empty()) doc["timing"] = record.timing_note;
  const std::string text = doc.dump(2) + "\n";
  for (const auto& out : record.outputs) {
    fs::path sidecar = out;
    sidecar += ".provenance.json";
    write_file(sidecar, text);
  }
}

}  // namespace joinrelax::workbench
