#pragma once

#include <optional>
#include <string>

#include "joinrelax/workbench/commands.hpp"

namespace joinrelax::workbench {

// A run configuration file is a JSON object with optional sections "search", "gen-data",
// "train", "optimize", "landscape", "bench-runtime" and "front-sweep". Keys mirror the spec
// fields; unknown keys are rejected.
class RunConfig {
 public:
  RunConfig() = default;
  static RunConfig parse(const std::string& text);
  static RunConfig load(const std::filesystem::path& path);

  // Search settings: the named profile (or the file's "search.profile"), then the file's
  // "search" overrides.
  relax::SearchConfig search(const std::optional<std::string>& profile) const;

  void apply(GenDataSpec& spec) const;
  void apply(TrainSpec& spec) const;
  void apply(OptimizeSpec& spec) const;
  void apply(LandscapeSpec& spec) const;
  void apply(BenchSpec& spec) const;
  void apply(FrontSweepSpec& spec) const;

 private:
  std::string text_ = "{}";
};

}  // namespace joinrelax::workbench
