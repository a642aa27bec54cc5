#include "eirb/sampling/sampling.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace eirb::sampling
{

bool ParameterDomain::contains(const Parameter &mu, double tol) const
{
  for (int i = 0; i < 2; ++i)
    if (mu[i] < lower[i] - tol || mu[i] > upper[i] + tol)
      return false;
  return true;
}

double log_map(double x, double a, double b, double alpha)
{
  require(a < b && alpha > 0.0, "log_map: need a < b and alpha > 0");
  const double span = b - a;
  require(x >= a - 1e-12 * span && x <= b + 1e-12 * span, "log_map: x outside [a, b]");
  return a + span * (1.0 - std::exp(-alpha * (x - a) / span)) / (1.0 - std::exp(-alpha));
}

std::vector<double> axis_points(double a, double b, int k, const Distribution &distribution)
{
  require(k >= 1, "axis_points: need k >= 1");
  std::vector<double> out(k);
  for (int i = 0; i < k; ++i)
  {
    // k = 1 collapses to the lower end.
    const double x = k == 1 ? a : i == k - 1 ? b : a + (b - a) * i / (k - 1);
    out[i] = distribution.kind == Distribution::Kind::Log ? log_map(x, a, b, distribution.alpha) : x;
  }
  if (k > 1)
  {
    out.front() = a;
    out.back() = b;
  }
  return out;
}

SampleSet build_sample_grid(const ParameterDomain &domain, int k, const Distribution &distribution)
{
  require(k >= 1, "build_sample_grid: need k >= 1");
  const auto ax = axis_points(domain.lower[0], domain.upper[0], k, distribution);
  const auto ay = axis_points(domain.lower[1], domain.upper[1], k, distribution);
  SampleSet s;
  s.provenance =
    distribution.kind == Distribution::Kind::Log ? Provenance::LogGrid : Provenance::UniformGrid;
  s.points.reserve(static_cast<std::size_t>(k) * k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      s.points.push_back({ax[i], ay[j]});
  return s;
}

void write_samples_csv(const std::string &path, const SampleSet &samples)
{
  std::ofstream out(path);
  if (!out)
    throw ConfigError("cannot write " + path);
  out << "mu1,mu2\n" << std::setprecision(17);
  for (const auto &p : samples.points)
    out << p[0] << ',' << p[1] << '\n';
}

SampleSet read_samples_csv(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot read " + path);
  SampleSet s;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line))
  {
    if (line.empty())
      continue;
    std::istringstream row(line);
    Parameter p{};
    char comma = 0;
    if (!(row >> p[0] >> comma >> p[1]) || comma != ',')
      throw ConfigError("malformed sample row in " + path + ": " + line);
    s.points.push_back(p);
  }
  return s;
}

}  // namespace eirb::sampling
