#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace joinrelax::workbench {

// 64-bit FNV-1a of a file's bytes, as 16 hex digits.
std::string file_hash(const std::filesystem::path& path);

struct Provenance {
  std::string command;
  std::uint64_t seed = 0;
  std::string config_json;  // echo of the effective configuration
  std::vector<std::filesystem::path> inputs;
  std::vector<std::filesystem::path> outputs;
  std::string timing_note;
};

// Writes <output>.provenance.json next to each output.
void write_provenance(const Provenance& record);

}  // namespace joinrelax::workbench
