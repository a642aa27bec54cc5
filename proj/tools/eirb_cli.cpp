#include <filesystem>
#include <iostream>

#include "CLI11.hpp"

#include "eirb/cli/experiment.hpp"
#include "eirb/cli/report.hpp"

namespace
{

constexpr int kGoldenFailure = 1;
constexpr int kConfigError = 2;

/// A golden id names data/golden/<id>.json; an existing path is used as is.
std::string golden_path(const std::string &id_or_path)
{
  if (std::filesystem::exists(id_or_path))
    return id_or_path;
  const char *dir = std::getenv("EIRB_GOLDEN_DIR");
  return std::string(dir ? dir : EIRB_GOLDEN_DIR) + "/" + id_or_path + ".json";
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Empirical interpolation reduced-basis experiments"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  auto *run = app.add_subcommand("run", "Run one study from a JSON config");
  run->add_option("--config", config_path, "Experiment config")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Report directory (defaults to the config's output_dir)");

  std::string report_dir, golden_id;
  auto *compare = app.add_subcommand("compare", "Compare a report against a golden table");
  compare->add_option("--report", report_dir, "Report directory")->required();
  compare->add_option("--golden", golden_id, "Golden table id or path")->required();

  std::string plot_report;
  auto *plot = app.add_subcommand("plotdata", "Write plot-ready CSVs for a report");
  plot->add_option("--report", plot_report, "Report directory")->required();

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try
  {
    if (run->parsed())
    {
      const auto config = eirb::cli::load_config(config_path);
      const std::string dir = out_dir.empty() ? config.output_dir : out_dir;
      if (dir.empty())
        throw eirb::ConfigError("no output directory: pass --out or set output_dir");
      const auto result =
        eirb::cli::run_experiment(config, dir, [](const std::string &line) { std::cerr << line << '\n'; });
      std::cout << "wrote " << result.files.size() << " files to " << result.directory << " (cache hits "
                << result.cache_hits << ", misses " << result.cache_misses << ")\n";
      return 0;
    }
    if (compare->parsed())
    {
      const auto result = eirb::cli::compare_report(report_dir, eirb::cli::load_golden(golden_path(golden_id)));
      std::cout << result.text();
      return result.passed() ? 0 : kGoldenFailure;
    }
    for (const auto &path : eirb::cli::emit_plotdata(plot_report))
      std::cout << path << '\n';
    return 0;
  }
  catch (const eirb::ConfigError &e)
  {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  }
}
