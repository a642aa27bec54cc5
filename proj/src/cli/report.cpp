#include "eirb/cli/report.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "json.hpp"

#include "eirb/cli/table.hpp"
#include "eirb/common.hpp"

namespace eirb::cli
{

namespace
{

namespace fs = std::filesystem;
using nlohmann::json;

ToleranceKind kind_from_string(const std::string &name)
{
  if (name == "factor")
    return ToleranceKind::Factor;
  if (name == "absolute")
    return ToleranceKind::Absolute;
  throw ConfigError("unknown tolerance kind '" + name + "'");
}

std::optional<CsvTable> read_optional(const fs::path &path)
{
  if (!fs::exists(path))
    return std::nullopt;
  return CsvTable::read(path.string());
}

std::string series_name(const CsvTable &t, std::size_t row)
{
  return t.at(row, "method") + " N=" + t.at(row, "N");
}

/// series,x,y rows from one column of a report table, skipping non-finite values.
CsvTable curve(const std::optional<CsvTable> &source, const std::string &quantity)
{
  CsvTable out({"series", "x", "y"});
  if (!source || source->column(quantity) < 0)
    return out;
  for (std::size_t i = 0; i < source->size(); ++i)
  {
    const double y = parse_double(source->at(i, quantity));
    if (source->at(i, "M") == "0" || !std::isfinite(y))
      continue;
    out.add({series_name(*source, i), source->at(i, "M"), source->at(i, quantity)});
  }
  return out;
}

}  // namespace

int GoldenRow::resolved_m() const
{
  if (!m.empty() && m.back() == 'N')
  {
    const std::string factor = m.substr(0, m.size() - 1);
    return (factor.empty() ? 1 : std::stoi(factor)) * n;
  }
  return std::stoi(m);
}

GoldenTable parse_golden(const std::string &json_text)
{
  try
  {
    const json root = json::parse(json_text);
    GoldenTable table;
    table.id = root.at("id").get<std::string>();
    table.file = root.at("file").get<std::string>();
    const std::string default_quantity = root.value("quantity", "");
    for (const auto &r : root.at("rows"))
    {
      GoldenRow row;
      row.n = r.at("N").get<int>();
      row.m = r.at("M").is_string() ? r.at("M").get<std::string>() : std::to_string(r.at("M").get<int>());
      row.method = r.at("method").get<std::string>();
      row.quantity = r.value("quantity", default_quantity);
      row.expected = r.at("expected").get<double>();
      row.kind = kind_from_string(r.at("kind").get<std::string>());
      row.tolerance = r.at("tolerance").get<double>();
      row.citation = r.at("citation").get<std::string>();
      if (row.citation.empty())
        throw ConfigError("golden row without citation in " + table.id);
      if (row.quantity.empty())
        throw ConfigError("golden row without quantity in " + table.id);
      table.rows.push_back(std::move(row));
    }
    return table;
  }
  catch (const json::exception &e)
  {
    throw ConfigError(std::string("malformed golden table: ") + e.what());
  }
}

GoldenTable load_golden(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot read golden table " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_golden(buffer.str());
}

bool within_tolerance(double expected, double measured, ToleranceKind kind, double tolerance)
{
  if (!std::isfinite(measured))
    return false;
  if (kind == ToleranceKind::Absolute)
    return std::abs(measured - expected) <= tolerance;
  if (expected == measured)
    return true;
  if (expected == 0.0 || measured == 0.0 || (expected > 0.0) != (measured > 0.0))
    return false;
  const double ratio = measured / expected;
  return ratio >= 1.0 / tolerance && ratio <= tolerance;
}

std::size_t CompareResult::failures() const
{
  std::size_t n = 0;
  for (const auto &r : rows)
    n += r.pass ? 0 : 1;
  return n;
}

std::string CompareResult::text() const
{
  std::ostringstream os;
  for (const auto &r : rows)
  {
    const auto &g = r.golden;
    os << (r.pass ? "PASS " : "FAIL ") << table_id << " N=" << g.n << " M=" << g.m << ' ' << g.method << ' '
       << g.quantity << " expected=" << format_double(g.expected) << " measured=" << format_double(r.measured)
       << (g.kind == ToleranceKind::Factor ? " factor=" : " absolute=") << g.tolerance;
    if (!r.pass)
      os << " (" << r.reason << ')';
    os << "  [" << g.citation << "]\n";
  }
  os << table_id << ": " << rows.size() - failures() << '/' << rows.size() << " rows pass\n";
  return os.str();
}

CompareResult compare_report(const std::string &report_dir, const GoldenTable &golden)
{
  CompareResult result;
  result.table_id = golden.id;
  const auto table = read_optional(fs::path(report_dir) / golden.file);
  for (const auto &g : golden.rows)
  {
    CompareRow row{g, std::nan(""), false, {}};
    std::optional<std::size_t> match;
    if (table)
      for (std::size_t i = 0; i < table->size() && !match; ++i)
        if (table->at(i, "N") == std::to_string(g.n) && table->at(i, "M") == std::to_string(g.resolved_m()) &&
            table->at(i, "method") == g.method)
          match = i;
    if (!table)
      row.reason = "report has no " + golden.file;
    else if (!match)
      row.reason = "missing cell";
    else if (table->column(g.quantity) < 0)
      row.reason = "report has no column " + g.quantity;
    else if (table->at(*match, "status") != "ok")
      row.reason = "cell status " + table->at(*match, "status");
    else
    {
      row.measured = parse_double(table->at(*match, g.quantity));
      row.pass = within_tolerance(g.expected, row.measured, g.kind, g.tolerance);
      if (!row.pass)
        row.reason = "outside tolerance";
    }
    result.rows.push_back(std::move(row));
  }
  return result;
}

std::vector<std::string> emit_plotdata(const std::string &report_dir)
{
  const fs::path dir = fs::path(report_dir) / "plotdata";
  fs::create_directories(dir);
  const auto interp = read_optional(fs::path(report_dir) / "interpolation.csv");
  const auto summary = read_optional(fs::path(report_dir) / "summary.csv");
  const auto points = read_optional(fs::path(report_dir) / "points.csv");

  std::vector<std::pair<std::string, CsvTable>> outputs;
  outputs.emplace_back("interp_error_vs_M.csv", curve(interp, "eps_max"));
  outputs.emplace_back("lebesgue_vs_M.csv", curve(interp, "lebesgue"));
  outputs.emplace_back("rom_error_s_vs_M.csv", curve(summary, "eps_s_NM"));
  outputs.emplace_back("rom_error_u_vs_M.csv", curve(summary, "eps_u_NM"));
  outputs.emplace_back("effectivity_s_vs_M.csv", curve(summary, "eta_s"));
  outputs.emplace_back("effectivity_u_vs_M.csv", curve(summary, "eta_u"));

  CsvTable scatter({"series", "x1", "x2", "order"});
  if (points)
    for (std::size_t i = 0; i < points->size(); ++i)
      scatter.add({series_name(*points, i) + " M=" + points->at(i, "M"), points->at(i, "x1"), points->at(i, "x2"),
                   points->at(i, "order")});
  outputs.emplace_back("point_scatter.csv", std::move(scatter));

  std::vector<std::string> written;
  for (const auto &[name, table] : outputs)
  {
    const std::string path = (dir / name).string();
    table.write(path);
    written.push_back(path);
  }
  return written;
}

}  // namespace eirb::cli
