#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "eirb/fem/problem.hpp"
#include "eirb/rom/reduced.hpp"
#include "eirb/sampling/sampling.hpp"

namespace eirb::rom
{

/// Truth solution at one parameter.
struct TruthSample
{
  Eigen::VectorXd field;
  double output = 0.0;
  double norm = 0.0;  // ||u||_X
};

/// Truth solutions stored on disk, one file per parameter, keyed by a hash of
/// the space fingerprint, problem, conductivity floor and parameter bits.
class TruthCache
{
public:
  /// An empty directory disables caching.
  explicit TruthCache(std::string directory);

  std::string key(const fem::TruthModel &model, const Parameter &mu) const;
  std::optional<TruthSample> load(const fem::TruthModel &model, const Parameter &mu) const;
  void store(const fem::TruthModel &model, const Parameter &mu, const TruthSample &sample) const;

  std::size_t hits() const { return hits_; }
  std::size_t misses() const { return misses_; }

  /// Loads or solves (with continuation) every parameter, in parallel.
  std::vector<TruthSample> solve_all(const fem::TruthModel &model, const sampling::SampleSet &samples,
                                     const NewtonSettings &settings = {});

private:
  std::string directory_;
  mutable std::size_t hits_ = 0;
  mutable std::size_t misses_ = 0;
};

/// ||v||_X for a truth coefficient vector.
double norm_x(const fem::TruthModel &model, const Eigen::Ref<const Eigen::VectorXd> &v);

/// Errors of the standard and interpolated reduced models at one parameter.
struct ErrorSample
{
  Parameter mu{};
  double s_truth = 0.0;
  double s_rb = 0.0;
  double s_ei = 0.0;
  double eps_s_rb = 0.0;
  double eps_s_ei = 0.0;
  double eps_u_rb = 0.0;
  double eps_u_ei = 0.0;
  double u_norm = 0.0;
  std::string status = "ok";
};

/// Effectivities below this standard-RB error are excluded from the averages.
inline constexpr double kEffectivityGuard = 1e-14;

struct ErrorReport
{
  std::vector<ErrorSample> samples;
  double eps_s_rb = 0.0;  // sum |s - s_N| / sum |s|
  double eps_u_rb = 0.0;  // sum ||u - u_N||_X / sum ||u||_X
  double eps_s_ei = 0.0;
  double eps_u_ei = 0.0;
  double eta_s = 0.0;  // plain mean of eps_s_ei / eps_s_rb
  double eta_u = 0.0;
  std::size_t excluded_s = 0;
  std::size_t excluded_u = 0;
  std::size_t failed = 0;  // samples whose reduced solve failed (status != "ok")

  /// Per-sample effectivities; NaN where the guard excludes the sample.
  static double eta(double ei, double rb) { return rb < kEffectivityGuard ? std::nan("") : ei / rb; }
};

/// Aggregates per-sample errors into averaged errors and effectivities.
ErrorReport summarize_errors(std::vector<ErrorSample> samples);

/// Fills one error sample from the truth and two reduced solutions.
ErrorSample error_sample(const fem::TruthModel &model, const Eigen::MatrixXd &basis,
                         const Parameter &mu, const TruthSample &truth, const RomSolution &rb,
                         const RomSolution &ei);

/// Median seconds per call of each solver over the parameters, normalized by
/// the first solver (the truth model).
struct TimingTable
{
  std::vector<std::string> names;
  std::vector<double> median_seconds;
  std::vector<double> normalized;
};

TimingTable timing_harness(const std::vector<std::string> &names,
                           const std::vector<std::function<void(const Parameter &)>> &solvers,
                           const std::vector<Parameter> &parameters, int warmup = 2);

}  // namespace eirb::rom
