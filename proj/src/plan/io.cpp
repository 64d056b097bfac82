#include "joinrelax/plan/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "joinrelax/error.hpp"
#include "joinrelax/plan/matrix.hpp"

namespace joinrelax {

std::string plan_to_json(const std::string& query_id, const Plan& plan) {
  nlohmann::ordered_json doc;
  doc["query_id"] = query_id;
  doc["n"] = plan.size();
  auto edges = nlohmann::json::array();
  for (std::size_t k = 0; k < plan.joins().size(); ++k) {
    const std::size_t parent = plan.size() + k + 1;
    edges.push_back({plan.joins()[k].left + 1, parent});
    edges.push_back({plan.joins()[k].right + 1, parent});
  }
  doc["edges"] = std::move(edges);
  return doc.dump(2) + "\n";
}

PlanDocument plan_from_json(const std::string& text) {
  tensor::Matrix a;
  std::string query_id;
  try {
    const auto doc = nlohmann::json::parse(text);
    if (!doc.contains("n") || !doc.contains("edges")) throw FormatError("plan file needs 'n' and 'edges'");
    const auto n = doc.at("n").get<std::size_t>();
    if (n == 0) throw FormatError("plan file: n must be positive");
    const auto dim = static_cast<Eigen::Index>(2 * n - 1);
    a = tensor::Matrix::Zero(dim, dim);
    for (const auto& e : doc.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw FormatError("plan file: each edge is a pair [i, j]");
      const auto i = e.at(0).get<long long>();
      const auto j = e.at(1).get<long long>();
      if (i < 1 || j < 1 || i > dim || j > dim) throw FormatError("plan file: edge index out of range");
      a(i - 1, j - 1) = 1.0;
    }
    query_id = doc.value("query_id", std::string{});
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("plan file: ") + e.what());
  }
  return {query_id, decode(a)};
}

void save_plan(const std::filesystem::path& path, const std::string& query_id, const Plan& plan) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw FormatError("cannot write " + path.string());
  os << plan_to_json(query_id, plan);
}

PlanDocument load_plan(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot read " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return plan_from_json(ss.str());
}

void write_matrix(std::ostream& os, const tensor::Matrix& m) {
  os << std::setprecision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) os << (j ? " " : "") << m(i, j);
    os << '\n';
  }
}

tensor::Matrix read_matrix(std::istream& is) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::vector<double> row;
    double x = 0;
    while (ls >> x) row.push_back(x);
    if (row.empty()) continue;
    if (!rows.empty() && row.size() != rows.front().size()) throw FormatError("matrix dump: ragged rows");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) return {};
  tensor::Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return m;
}

}  // namespace joinrelax
