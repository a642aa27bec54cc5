#include "eirb/cli/experiment.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>

#include "json.hpp"

#include "eirb/cli/table.hpp"
#include "eirb/interpolation/gaussian_study.hpp"
#include "eirb/interpolation/regression.hpp"
#include "eirb/interpolation/system.hpp"
#include "eirb/parallel.hpp"
#include "eirb/rom/metrics.hpp"
#include "eirb/sampling/snapshots.hpp"

namespace eirb::cli
{

namespace
{

namespace fs = std::filesystem;

/// Collects written files for the manifest.
class ReportWriter
{
public:
  explicit ReportWriter(std::string directory) : directory_(std::move(directory))
  {
    fs::create_directories(directory_);
  }

  void write(const std::string &name, const CsvTable &table)
  {
    const std::string content = table.write(directory_ + "/" + name);
    files_.push_back({name, content});
  }

  void manifest(const ExperimentConfig &config, std::size_t hits, std::size_t misses) const
  {
    nlohmann::json root;
    root["config"] = nlohmann::json::parse(to_json_text(config));
    root["files"] = nlohmann::json::array();
    for (const auto &[name, content] : files_)
      root["files"].push_back({{"name", name}, {"fnv1a", hex64(fnv1a(content))}, {"bytes", content.size()}});
    root["cache"] = {{"hits", hits}, {"misses", misses}};
    std::ofstream out(directory_ + "/manifest.json", std::ios::binary);
    if (!out)
      throw ConfigError("cannot write manifest in " + directory_);
    out << root.dump(2) << '\n';
  }

  RunResult result(std::size_t hits, std::size_t misses) const
  {
    RunResult r{directory_, {}, hits, misses};
    for (const auto &f : files_)
      r.files.push_back(f.first);
    r.files.push_back("manifest.json");
    return r;
  }

private:
  std::string directory_;
  std::vector<std::pair<std::string, std::string>> files_;
};

std::string str(long long v) { return std::to_string(v); }

bool is_regression(Method m) { return m == Method::Foerm1 || m == Method::Foerm2; }

/// Interpolation method whose points and basis a method uses.
Method system_method(Method m)
{
  if (m == Method::Foerm1)
    return Method::Foeim1;
  if (m == Method::Foerm2)
    return Method::Foeim2;
  return m;
}

interp::SubsetTolerances subset_tolerances(const ExperimentConfig &c)
{
  return {c.tolerances.zero, c.tolerances.rank};
}

/// Interpolation systems for one nonlinear term, built on demand.
class SystemBuilder
{
public:
  SystemBuilder(const interp::SnapshotSamples &snapshots, const fem::NonlinearTerm &term,
                interp::SubsetTolerances tolerances, Eigen::Index max_size)
    : snapshots_(snapshots), term_(term), tolerances_(tolerances), max_size_(max_size),
      lagrange_(interp::snapshot_nonlinear(snapshots, term))
  {
  }

  /// Upper bound L on the number of interpolation functions.
  Eigen::Index dimension(Method m)
  {
    return m == Method::Eim ? lagrange_.size() : lagrange_.size() + taylor().size();
  }

  const interp::InterpolationSystem &system(Method m)
  {
    auto it = built_.find(m);
    if (it != built_.end())
      return it->second;
    interp::InterpolationSystem s = [&] {
      switch (m)
      {
      case Method::Eim:
        return interp::eim_greedy(lagrange_, std::min(max_size_, lagrange_.size()));
      case Method::Foeim1:
        return interp::foeim1_construct(lagrange_, taylor(), max_size_);
      default:
        return interp::foeim2_construct(lagrange_, taylor(), max_size_);
      }
    }();
    return built_.emplace(m, std::move(s)).first->second;
  }

private:
  const interp::CandidateSpace &taylor()
  {
    if (!taylor_)
      taylor_ = interp::build_taylor_space(snapshots_, term_, tolerances_).space;
    return *taylor_;
  }

  const interp::SnapshotSamples &snapshots_;
  fem::NonlinearTerm term_;
  interp::SubsetTolerances tolerances_;
  Eigen::Index max_size_;
  interp::CandidateSpace lagrange_;
  std::optional<interp::CandidateSpace> taylor_;
  std::map<Method, interp::InterpolationSystem> built_;
};

/// Status of a size-M request against a system of dimension L.
std::string size_status(Eigen::Index m, Eigen::Index dimension, const interp::InterpolationSystem &s)
{
  if (m > dimension)
    return "exceeds-L";
  if (m > s.size())
    return "exhausted";
  return "ok";
}

void run_gaussian(const ExperimentConfig &c, ReportWriter &writer, const ProgressLog &log)
{
  if (32 % c.coarsen != 0)
    throw ConfigError("coarsen must divide 32 for the Gaussian study");
  const interp::GaussianStudy study(32 / c.coarsen, c.degree);
  const auto domain = c.domain();
  const auto test = sampling::build_sample_grid(domain, c.test_grid, sampling::Distribution::uniform());
  const interp::TargetProvider targets = [&](std::size_t first, std::size_t count) {
    return study.targets(test, first, count);
  };

  CsvTable interp_table({"N", "M", "method", "eps_max", "lebesgue", "status"});
  CsvTable points_table({"method", "N", "M", "order", "x1", "x2"});
  for (int n : c.n_list)
  {
    const auto samples = sampling::build_sample_grid(domain, grid_side(n), c.distribution);
    const auto snapshots = study.snapshots(samples);
    const auto sizes = c.m_rule.sizes(n);
    const int max_m = *std::max_element(sizes.begin(), sizes.end());
    SystemBuilder builder(snapshots, study.term(), subset_tolerances(c), max_m);
    for (Method method : c.methods)
    {
      const Method base_method = system_method(method);
      const auto &base = builder.system(base_method);
      const Eigen::Index dimension = builder.dimension(base_method);
      Eigen::Index largest = 0;
      for (int m : sizes)
      {
        std::string status = size_status(m, dimension, base);
        double eps = std::nan(""), lebesgue = std::nan("");
        if (status == "ok")
        {
          const auto truncated = base.truncated(m);
          if (is_regression(method))
          {
            try
            {
              const interp::RegressionSystem regression(truncated, n);
              eps = interp::max_interp_error(regression, test.size(), targets).max;
              lebesgue = interp::lebesgue_constant(regression);
            }
            catch (const ConfigError &)
            {
              status = "rank-deficient";
            }
          }
          else
          {
            eps = interp::max_interp_error(truncated, test.size(), targets).max;
            lebesgue = interp::lebesgue_constant(truncated);
          }
          largest = std::max<Eigen::Index>(largest, m);
        }
        interp_table.add({str(n), str(m), to_string(method), format_double(eps), format_double(lebesgue), status});
        if (log)
          log(to_string(method) + " N=" + str(n) + " M=" + str(m) + " eps_max=" + format_double(eps));
      }
      for (Eigen::Index k = 0; k < largest; ++k)
      {
        const auto p = base.points()[k];
        points_table.add({to_string(method), str(n), str(largest), str(k + 1),
                          format_double(study.points()(p, 0)), format_double(study.points()(p, 1))});
      }
    }
  }
  writer.write("interpolation.csv", interp_table);
  writer.write("points.csv", points_table);
}

struct ReducedResult
{
  std::optional<rom::RomSolution> solution;
  int homotopy_steps = 0;
};

ReducedResult solve_reduced(const rom::ReducedSolve &solve, const Parameter &mu)
{
  ReducedResult r;
  try
  {
    r.solution = rom::solve_with_homotopy(solve, mu, r.homotopy_steps);
  }
  catch (const SolverError &)
  {
  }
  return r;
}

std::vector<std::string> error_row(int n, int m, const rom::ErrorSample &e, bool with_ei, int iterations,
                                   int homotopy_steps)
{
  const double nan = std::nan("");
  auto ei = [&](double v) { return format_double(with_ei ? v : nan); };
  return {str(n),
          str(m),
          format_double(e.mu[0]),
          format_double(e.mu[1]),
          format_double(e.s_truth),
          format_double(e.s_rb),
          ei(e.s_ei),
          format_double(e.eps_s_rb),
          ei(e.eps_s_ei),
          format_double(e.eps_u_rb),
          ei(e.eps_u_ei),
          ei(rom::ErrorReport::eta(e.eps_s_ei, e.eps_s_rb)),
          ei(rom::ErrorReport::eta(e.eps_u_ei, e.eps_u_rb)),
          str(iterations),
          str(homotopy_steps),
          e.status};
}

std::vector<std::string> summary_row(int n, int m, const std::string &method, const rom::ErrorReport &r,
                                     bool with_ei, double mean_iterations, const std::string &status)
{
  const double nan = std::nan("");
  auto ei = [&](double v) { return format_double(with_ei ? v : nan); };
  return {str(n),
          str(m),
          method,
          format_double(r.eps_s_rb),
          ei(r.eps_s_ei),
          format_double(r.eps_u_rb),
          ei(r.eps_u_ei),
          ei(r.eta_s),
          ei(r.eta_u),
          str(static_cast<long long>(r.excluded_s)),
          str(static_cast<long long>(r.excluded_u)),
          str(static_cast<long long>(r.failed)),
          format_double(mean_iterations),
          status};
}

void run_pde(const ExperimentConfig &c, ReportWriter &writer, rom::TruthCache &cache, const ProgressLog &log)
{
  if (c.degree != 3)
    throw ConfigError("the PDE studies use cubic elements (degree 3)");
  const auto kind = c.problem();
  const auto space = fem::default_space(kind, c.coarsen);
  const fem::TruthModel model(space, kind, c.conductivity_floor);
  const NewtonSettings settings{c.tolerances.newton, c.tolerances.newton_max_iterations};
  const auto domain = c.domain();
  const auto test = sampling::build_sample_grid(domain, c.test_grid, sampling::Distribution::uniform());
  if (log)
    log("truth sweep over " + str(static_cast<long long>(test.size())) + " test parameters");
  const auto truth = cache.solve_all(model, test, settings);

  std::map<Method, CsvTable> error_tables;
  for (Method m : c.methods)
    error_tables.emplace(m, CsvTable(error_columns()));
  CsvTable summary({"N", "M", "method", "eps_s_N", "eps_s_NM", "eps_u_N", "eps_u_NM", "eta_s", "eta_u",
                    "excluded_s", "excluded_u", "failed", "mean_iterations", "status"});
  CsvTable timing({"N", "M", "method", "median_seconds", "normalized"});

  for (int n : c.n_list)
  {
    const auto samples = sampling::build_sample_grid(domain, grid_side(n), c.distribution);
    const auto training = cache.solve_all(model, samples, settings);
    sampling::SnapshotBasis basis;
    basis.samples = samples;
    basis.raw.resize(space.num_nodes(), n);
    basis.outputs.resize(n);
    for (int j = 0; j < n; ++j)
    {
      basis.raw.col(j) = training[j].field;
      basis.outputs[j] = training[j].output;
    }
    sampling::orthonormalize(basis, model.stiffness());
    const auto reduced = rom::build_standard_rb(model, basis);
    const rom::StandardRb standard(model, reduced);
    const rom::ReducedSolve standard_solve = [&](const Parameter &mu, const Eigen::VectorXd *init) {
      return standard.solve(mu, settings, init);
    };
    if (log)
      log("N=" + str(n) + ": standard RB sweep");
    std::vector<ReducedResult> rb(test.size());
    parallel_for(test.size(), [&](std::size_t i) { rb[i] = solve_reduced(standard_solve, test.points[i]); });

    auto sample_of = [&](std::size_t i, const ReducedResult &ei) {
      rom::RomSolution failed;
      failed.alpha = Eigen::VectorXd::Zero(reduced.size());
      const auto &rb_sol = rb[i].solution ? *rb[i].solution : failed;
      const auto &ei_sol = ei.solution ? *ei.solution : failed;
      auto e = rom::error_sample(model, reduced.basis, test.points[i], truth[i], rb_sol, ei_sol);
      if (!rb[i].solution)
        e.status = "rb-failed";
      else if (!ei.solution)
        e.status = "failed";
      return e;
    };

    if (c.has(Method::StandardRb))
    {
      std::vector<rom::ErrorSample> errors;
      double iterations = 0.0;
      for (std::size_t i = 0; i < test.size(); ++i)
      {
        auto e = sample_of(i, rb[i]);
        const int its = rb[i].solution ? rb[i].solution->report.iterations : 0;
        iterations += its;
        error_tables.at(Method::StandardRb).add(error_row(n, 0, e, false, its, rb[i].homotopy_steps));
        errors.push_back(std::move(e));
      }
      summary.add(summary_row(n, 0, to_string(Method::StandardRb), rom::summarize_errors(std::move(errors)),
                              false, iterations / static_cast<double>(test.size()), "ok"));
    }

    const auto snapshots = rom::sample_snapshots(space, basis);
    const auto terms = model.terms();
    const auto sizes = c.m_rule.sizes(n);
    const int max_m = *std::max_element(sizes.begin(), sizes.end());
    std::vector<SystemBuilder> builders;
    for (const auto &term : terms)
      builders.emplace_back(snapshots, term, subset_tolerances(c), max_m);

    std::vector<std::string> timed_names{"fem", to_string(Method::StandardRb)};
    std::vector<rom::EiOperators> timed_ops;
    for (Method method : c.methods)
    {
      if (method == Method::StandardRb)
        continue;
      for (int m : sizes)
      {
        std::string status = "ok";
        std::vector<interp::InterpolationSystem> systems;
        for (auto &b : builders)
        {
          const auto &s = b.system(method);
          const auto term_status = size_status(m, b.dimension(method), s);
          if (term_status != "ok")
            status = term_status;
          else
            systems.push_back(s.truncated(m));
        }
        if (status != "ok")
        {
          summary.add(summary_row(n, m, to_string(method), rom::ErrorReport{}, false, 0.0, status));
          continue;
        }
        std::vector<const interp::InterpolationSystem *> pointers;
        for (const auto &s : systems)
          pointers.push_back(&s);
        auto ops = rom::build_ei_rb(model, reduced, pointers);
        const rom::ReducedSolve ei_solve = [&](const Parameter &mu, const Eigen::VectorXd *init) {
          return rom::solve_ei_rb(ops, mu, settings, init);
        };
        std::vector<ReducedResult> ei(test.size());
        parallel_for(test.size(), [&](std::size_t i) { ei[i] = solve_reduced(ei_solve, test.points[i]); });

        std::vector<rom::ErrorSample> errors;
        double iterations = 0.0;
        for (std::size_t i = 0; i < test.size(); ++i)
        {
          auto e = sample_of(i, ei[i]);
          const int its = ei[i].solution ? ei[i].solution->report.iterations : 0;
          iterations += its;
          error_tables.at(method).add(error_row(n, m, e, true, its, ei[i].homotopy_steps));
          errors.push_back(std::move(e));
        }
        const auto report = rom::summarize_errors(std::move(errors));
        summary.add(summary_row(n, m, to_string(method), report, true,
                                iterations / static_cast<double>(test.size()), "ok"));
        if (log)
          log(to_string(method) + " N=" + str(n) + " M=" + str(m) + " eta_s=" + format_double(report.eta_s) +
              " eta_u=" + format_double(report.eta_u) + " failed=" + str(static_cast<long long>(report.failed)));
        if (c.timing_samples > 0)
        {
          timed_names.push_back(to_string(method) + ":" + str(m));
          timed_ops.push_back(std::move(ops));
        }
      }
    }

    if (c.timing_samples > 0)
    {
      std::vector<Parameter> parameters;
      const std::size_t count = std::min<std::size_t>(static_cast<std::size_t>(c.timing_samples), test.size());
      for (std::size_t i = 0; i < count; ++i)
        parameters.push_back(test.points[i * test.size() / count]);
      std::vector<std::function<void(const Parameter &)>> solvers;
      solvers.push_back([&](const Parameter &mu) { model.solve_with_continuation(mu, settings); });
      solvers.push_back([&](const Parameter &mu) {
        int steps = 0;
        rom::solve_with_homotopy(standard_solve, mu, steps);
      });
      for (const auto &ops : timed_ops)
        solvers.push_back([&](const Parameter &mu) {
          int steps = 0;
          try
          {
            rom::solve_with_homotopy(
              [&](const Parameter &p, const Eigen::VectorXd *init) { return rom::solve_ei_rb(ops, p, settings, init); },
              mu, steps);
          }
          catch (const SolverError &)
          {
          }
        });
      if (log)
        log("N=" + str(n) + ": timing over " + str(static_cast<long long>(count)) + " parameters");
      const auto table = rom::timing_harness(timed_names, solvers, parameters);
      for (std::size_t k = 0; k < table.names.size(); ++k)
      {
        const auto &name = table.names[k];
        const auto colon = name.find(':');
        const std::string method = colon == std::string::npos ? name : name.substr(0, colon);
        const std::string m = colon == std::string::npos ? "0" : name.substr(colon + 1);
        timing.add({str(n), m, method, format_double(table.median_seconds[k]), format_double(table.normalized[k])});
      }
    }
  }

  for (Method m : c.methods)
    writer.write("errors_" + to_string(m) + ".csv", error_tables.at(m));
  writer.write("summary.csv", summary);
  if (c.timing_samples > 0)
    writer.write("timing.csv", timing);
}

}  // namespace

const std::vector<std::string> &error_columns()
{
  static const std::vector<std::string> columns{"N",        "M",       "mu1",      "mu2",      "s_truth", "s_N",
                                                "s_NM",     "eps_s_N", "eps_s_NM", "eps_u_N",  "eps_u_NM", "eta_s",
                                                "eta_u",    "iterations", "homotopy_steps", "status"};
  return columns;
}

RunResult run_experiment(const ExperimentConfig &config, const std::string &directory, const ProgressLog &log)
{
  ReportWriter writer(directory);
  rom::TruthCache cache(config.cache_dir);
  if (!config.methods.empty() && !config.n_list.empty())
  {
    if (config.study == Study::Gaussian)
      run_gaussian(config, writer, log);
    else
      run_pde(config, writer, cache, log);
  }
  writer.manifest(config, cache.hits(), cache.misses());
  return writer.result(cache.hits(), cache.misses());
}

}  // namespace eirb::cli
