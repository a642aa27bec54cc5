#pragma once

#include <string>
#include <vector>

namespace eirb::cli
{

enum class ToleranceKind
{
  Factor,   // measured / expected within [1/tol, tol]
  Absolute  // |measured - expected| <= tol
};

struct GoldenRow
{
  int n = 0;
  std::string m;  // "N", "2N", ... or an explicit integer
  std::string method;
  std::string quantity;
  double expected = 0.0;
  ToleranceKind kind = ToleranceKind::Factor;
  double tolerance = 1.0;
  std::string citation;

  int resolved_m() const;
};

/// Reference values for one table, read from data/golden/<id>.json.
struct GoldenTable
{
  std::string id;
  std::string file;  // report CSV holding the measured values
  std::vector<GoldenRow> rows;
};

GoldenTable parse_golden(const std::string &json_text);
GoldenTable load_golden(const std::string &path);

bool within_tolerance(double expected, double measured, ToleranceKind kind, double tolerance);

struct CompareRow
{
  GoldenRow golden;
  double measured = 0.0;
  bool pass = false;
  std::string reason;  // empty on pass
};

struct CompareResult
{
  std::string table_id;
  std::vector<CompareRow> rows;

  std::size_t failures() const;
  bool passed() const { return failures() == 0; }
  /// One line per row plus a summary line.
  std::string text() const;
};

CompareResult compare_report(const std::string &report_dir, const GoldenTable &golden);

/// Writes long-format plot CSVs into <report_dir>/plotdata and returns their
/// paths. Missing report tables yield header-only files.
std::vector<std::string> emit_plotdata(const std::string &report_dir);

}  // namespace eirb::cli
