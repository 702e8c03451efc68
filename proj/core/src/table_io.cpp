#include "tskfit/table_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "tskfit/error.hpp"

namespace tskfit {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(delim, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

std::string format_real(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::size_t Table::column_index(const std::string& name) const {
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (names[j] == name) return j;
  }
  throw Error(ErrorKind::MissingColumn, "column '" + name + "' not found in table header");
}

Dataset Table::to_dataset(const std::string& output_column) const {
  const std::size_t out = column_index(output_column);
  std::vector<std::string> inputs;
  Eigen::MatrixXd x(values.rows(), values.cols() - 1);
  Eigen::Index c = 0;
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (j == out) continue;
    inputs.push_back(names[j]);
    x.col(c++) = values.col(static_cast<Eigen::Index>(j));
  }
  return Dataset(std::move(inputs), output_column, std::move(x), values.col(static_cast<Eigen::Index>(out)));
}

Table parse_table(std::string_view text, std::string_view source) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!trim(line).empty()) lines.push_back(line);
    start = end + 1;
  }
  const std::string where(source);
  if (lines.empty()) throw Error(ErrorKind::EmptyFile, where + ": no header row");

  const char delim = lines.front().find('\t') != std::string_view::npos ? '\t' : ',';
  Table table;
  std::set<std::string> seen;
  for (auto name : split(lines.front(), delim)) {
    if (name.empty()) throw Error(ErrorKind::ParseError, where + ": empty column name in header");
    if (!seen.insert(std::string(name)).second) {
      throw Error(ErrorKind::ParseError, where + ": duplicate column '" + std::string(name) + "'");
    }
    table.names.emplace_back(name);
  }
  if (lines.size() < 2) throw Error(ErrorKind::EmptyFile, where + ": header but no data rows");

  const auto cols = static_cast<Eigen::Index>(table.names.size());
  table.values.resize(static_cast<Eigen::Index>(lines.size() - 1), cols);
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto fields = split(lines[r], delim);
    if (fields.size() != table.names.size()) {
      throw Error(ErrorKind::RaggedRow,
                  where + ": expected " + std::to_string(table.names.size()) + " fields, found " +
                      std::to_string(fields.size()),
                  r);
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      auto field = fields[c];
      if (!field.empty() && field.front() == '+') field.remove_prefix(1);
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
      if (field.empty() || ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(value)) {
        throw Error(ErrorKind::ParseError,
                    where + ": column '" + table.names[c] + "' has non-numeric value '" + std::string(fields[c]) + "'",
                    r);
      }
      table.values(static_cast<Eigen::Index>(r - 1), static_cast<Eigen::Index>(c)) = value;
    }
  }
  return table;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorKind::Io, "failed writing '" + path.string() + "'");
}

Table read_table_file(const std::filesystem::path& path) { return parse_table(read_text_file(path), path.string()); }

Dataset read_table(const std::filesystem::path& path, const std::string& output_column) {
  return read_table_file(path).to_dataset(output_column);
}

std::string format_table(const Dataset& ds, char delimiter) {
  std::string out;
  const auto names = ds.names();
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (j > 0) out += delimiter;
    out += names[j];
  }
  out += '\n';
  for (std::size_t i = 0; i < ds.rows(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    for (std::size_t j = 0; j < ds.arity(); ++j) {
      out += format_real(ds.inputs()(row, static_cast<Eigen::Index>(j)));
      out += delimiter;
    }
    out += format_real(ds.output()(row));
    out += '\n';
  }
  return out;
}

void write_table(const Dataset& ds, const std::filesystem::path& path, char delimiter) {
  write_text_file(path, format_table(ds, delimiter));
}

}  // namespace tskfit
