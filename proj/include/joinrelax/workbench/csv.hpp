#pragma once

#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace joinrelax::workbench {

// Shortest decimal that round-trips; "inf"/"nan" spelled out.
std::string format_double(double value);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }

  void add_row(std::vector<std::string> row);

  std::string to_string() const;
  void save(const std::filesystem::path& path) const;

  static CsvTable parse(std::string_view text);
  static CsvTable load(const std::filesystem::path& path);

  std::size_t column(std::string_view name) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace joinrelax::workbench
