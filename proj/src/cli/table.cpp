#include "eirb/cli/table.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "eirb/common.hpp"

namespace eirb::cli
{

namespace
{

std::vector<std::string> split(const std::string &line)
{
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ','))
    cells.push_back(cell);
  if (!line.empty() && line.back() == ',')
    cells.emplace_back();
  return cells;
}

}  // namespace

void CsvTable::add(std::vector<std::string> row)
{
  require(row.size() == header_.size(), "CsvTable: row width differs from header");
  rows_.push_back(std::move(row));
}

int CsvTable::column(const std::string &name) const
{
  for (std::size_t i = 0; i < header_.size(); ++i)
    if (header_[i] == name)
      return static_cast<int>(i);
  return -1;
}

const std::string &CsvTable::at(std::size_t row, const std::string &name) const
{
  const int c = column(name);
  if (c < 0)
    throw ConfigError("table has no column '" + name + "'");
  return rows_.at(row)[static_cast<std::size_t>(c)];
}

std::string CsvTable::text() const
{
  std::string out;
  auto append = [&](const std::vector<std::string> &cells) {
    for (std::size_t i = 0; i < cells.size(); ++i)
    {
      if (i)
        out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  append(header_);
  for (const auto &row : rows_)
    append(row);
  return out;
}

std::string CsvTable::write(const std::string &path) const
{
  std::string content = text();
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw ConfigError("cannot write " + path);
  out << content;
  return content;
}

CsvTable CsvTable::read(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot read " + path);
  std::string line;
  if (!std::getline(in, line))
    throw ConfigError(path + " is empty");
  CsvTable table(split(line));
  while (std::getline(in, line))
  {
    if (line.empty())
      continue;
    auto cells = split(line);
    if (cells.size() != table.header_.size())
      throw ConfigError(path + ": ragged row '" + line + "'");
    table.rows_.push_back(std::move(cells));
  }
  return table;
}

std::string format_double(double value)
{
  if (!std::isfinite(value))
    return "nan";
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.12e", value);
  return buffer;
}

double parse_double(const std::string &cell)
{
  try
  {
    return std::stod(cell);
  }
  catch (const std::exception &)
  {
    return std::nan("");
  }
}

}  // namespace eirb::cli
