#pragma once

#include <string>
#include <vector>

namespace eirb::cli
{

/// Comma-separated table with a header row; cells never contain commas.
class CsvTable
{
public:
  CsvTable() = default;
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  const std::vector<std::string> &header() const { return header_; }
  const std::vector<std::vector<std::string>> &rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }

  void add(std::vector<std::string> row);
  /// Index of a header column; -1 when absent.
  int column(const std::string &name) const;
  const std::string &at(std::size_t row, const std::string &name) const;

  std::string text() const;
  /// Writes the table and returns its text.
  std::string write(const std::string &path) const;
  /// Throws ConfigError when the file is missing or ragged.
  static CsvTable read(const std::string &path);

private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Fixed "%.12e" form; "nan" for non-finite values.
std::string format_double(double value);
double parse_double(const std::string &cell);

}  // namespace eirb::cli
