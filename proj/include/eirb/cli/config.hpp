#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eirb/fem/problem.hpp"
#include "eirb/sampling/sampling.hpp"

namespace eirb::cli
{

enum class Study
{
  Gaussian,
  Elliptic,
  Diffusion
};

std::string to_string(Study study);

enum class Method
{
  Eim,
  Foeim1,
  Foeim2,
  Foerm1,
  Foerm2,
  StandardRb
};

std::string to_string(Method method);
Method method_from_string(const std::string &name);

/// How the interpolation sizes M are derived from each N.
struct MRule
{
  enum class Kind
  {
    Equal,      // M = N
    Multiples,  // M = c N for each factor c
    List        // explicit M values
  };
  Kind kind = Kind::Equal;
  std::vector<int> values;

  std::vector<int> sizes(int n) const;
  /// Label of the i-th size for N, e.g. "2N" or "37".
  std::string label(int n, int m) const;
};

struct Tolerances
{
  double zero = 1e-12;
  double rank = 1e-10;
  double newton = 1e-10;
  int newton_max_iterations = 50;
};

/// One study, read from a JSON file.
struct ExperimentConfig
{
  Study study = Study::Gaussian;
  int coarsen = 1;  // mesh resolution divisor relative to the reference meshes
  int degree = 3;
  sampling::Distribution distribution = sampling::Distribution::uniform();
  std::vector<int> n_list;
  MRule m_rule;
  std::vector<Method> methods;
  int test_grid = 30;
  int timing_samples = 0;  // 0 disables the timing table
  double conductivity_floor = fem::kDefaultConductivityFloor;
  Tolerances tolerances;
  std::string output_dir;
  std::string cache_dir;
  std::uint64_t seed = 1;

  bool has(Method m) const;
  fem::ProblemKind problem() const;
  sampling::ParameterDomain domain() const;
};

/// Parses JSON text. Throws ConfigError on unknown keys, bad values or
/// violated invariants.
ExperimentConfig parse_config(const std::string &json_text);
ExperimentConfig load_config(const std::string &path);
/// Canonical JSON form (sorted keys, two-space indent).
std::string to_json_text(const ExperimentConfig &config);

/// Side length k of the k x k sample grid for N; ConfigError unless N is a square.
int grid_side(int n);

}  // namespace eirb::cli
