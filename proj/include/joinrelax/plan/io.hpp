#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "joinrelax/plan/plan.hpp"
#include "joinrelax/tensor/matrix.hpp"

namespace joinrelax {

struct PlanDocument {
  std::string query_id;
  Plan plan;
};

// JSON {"query_id", "n", "edges": [[i, j], ...]} with 1-based node indices, i joined into j.
// Malformed JSON throws FormatError; edges that do not form a plan throw PlanDecodeError.
std::string plan_to_json(const std::string& query_id, const Plan& plan);
PlanDocument plan_from_json(const std::string& text);
void save_plan(const std::filesystem::path& path, const std::string& query_id, const Plan& plan);
PlanDocument load_plan(const std::filesystem::path& path);

// Dense rows of space-separated reals, one row per line.
void write_matrix(std::ostream& os, const tensor::Matrix& m);
tensor::Matrix read_matrix(std::istream& is);

}  // namespace joinrelax
