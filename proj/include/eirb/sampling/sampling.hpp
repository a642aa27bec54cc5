#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "eirb/common.hpp"
#include "eirb/fem/problem.hpp"

namespace eirb::sampling
{

struct ParameterDomain
{
  Parameter lower{0.0, 0.0};
  Parameter upper{1.0, 1.0};

  bool contains(const Parameter &mu, double tol = 1e-12) const;

  static ParameterDomain gaussian() { return {{-1.0, -1.0}, {-0.01, -0.01}}; }
  static ParameterDomain elliptic() { return {{1.0, 1.0}, {10.0, 10.0}}; }
  static ParameterDomain diffusion() { return {{1.0, 0.0}, {10.0, 10.0}}; }
  static ParameterDomain of(fem::ProblemKind kind)
  {
    return kind == fem::ProblemKind::Elliptic ? elliptic() : diffusion();
  }
};

enum class Provenance
{
  UniformGrid,
  LogGrid,
  Explicit
};

struct SampleSet
{
  std::vector<Parameter> points;
  Provenance provenance = Provenance::Explicit;

  std::size_t size() const { return points.size(); }
};

struct Distribution
{
  enum class Kind
  {
    Uniform,
    Log
  };
  Kind kind = Kind::Uniform;
  double alpha = 3.0;

  static Distribution uniform() { return {Kind::Uniform, 0.0}; }
  static Distribution log(double alpha) { return {Kind::Log, alpha}; }
};

/// y(x) = a + (b-a)(1 - exp(-alpha (x-a)/(b-a))) / (1 - exp(-alpha)).
/// Maps [a,b] onto itself, increasing, clustered toward b.
double log_map(double x, double a, double b, double alpha);

/// k points per axis including both ends.
std::vector<double> axis_points(double a, double b, int k, const Distribution &distribution);

/// Tensor k x k grid; point (i, j) = (axis1[i], axis2[j]) is stored at i*k + j.
SampleSet build_sample_grid(const ParameterDomain &domain, int k, const Distribution &distribution);

/// One parameter point per row, "mu1,mu2" with a header line.
void write_samples_csv(const std::string &path, const SampleSet &samples);
SampleSet read_samples_csv(const std::string &path);

}  // namespace eirb::sampling
