#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "tskfit/dataset.hpp"

namespace tskfit {

// Delimited numeric table with a mandatory header row.
struct Table {
  std::vector<std::string> names;
  Eigen::MatrixXd values;  // rows x columns

  std::size_t column_index(const std::string& name) const;  // throws MissingColumn
  Dataset to_dataset(const std::string& output_column) const;
};

// Comma or tab separated (tab when the header line contains a tab). Blank
// lines are skipped. ParseError rows are 1-based data rows (the header is
// not counted).
Table parse_table(std::string_view text, std::string_view source = "<memory>");
Table read_table_file(const std::filesystem::path& path);

Dataset read_table(const std::filesystem::path& path, const std::string& output_column);

// Inputs then output, shortest round-trip decimals, LF line endings.
std::string format_table(const Dataset& ds, char delimiter = ',');
void write_table(const Dataset& ds, const std::filesystem::path& path, char delimiter = ',');

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

// Shortest decimal text that parses back to exactly `v`.
std::string format_real(double v);

}  // namespace tskfit
