#pragma once

#include <functional>
#include <string>
#include <vector>

#include "eirb/cli/config.hpp"

namespace eirb::cli
{

/// What a run wrote, in the order listed in manifest.json.
struct RunResult
{
  std::string directory;
  std::vector<std::string> files;  // names relative to directory
  std::size_t cache_hits = 0;
  std::size_t cache_misses = 0;
};

using ProgressLog = std::function<void(const std::string &)>;

/// Runs one study and writes its CSVs plus manifest.json into `directory`
/// (created if needed).
///
/// Gaussian: interpolation.csv (N, M, method, eps_max, lebesgue, status) and
/// points.csv (method, N, M, order, x1, x2).
/// PDE: errors_<method>.csv per method, summary.csv, and timing.csv when
/// timing_samples > 0.
RunResult run_experiment(const ExperimentConfig &config, const std::string &directory,
                         const ProgressLog &log = {});

/// Columns of the per-method error tables.
const std::vector<std::string> &error_columns();

}  // namespace eirb::cli
