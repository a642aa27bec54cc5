#include "eirb/interpolation/gaussian_study.hpp"

#include <cmath>

#include "eirb/fem/space.hpp"

namespace eirb::interp
{

GaussianStudy::GaussianStudy(int elements_per_side, int degree)
{
  const fem::Resolution res{elements_per_side, elements_per_side};
  const auto space =
    fem::DiscreteSpace::build(fem::GeometrySpec::unit_square(), std::span(&res, 1), degree);
  points_ = space.quadrature().coords;
}

Eigen::VectorXd GaussianStudy::field(const Parameter &mu) const
{
  const Eigen::ArrayXd dx = points_.col(0).array() - mu[0];
  const Eigen::ArrayXd dy = points_.col(1).array() - mu[1];
  return (dx.square() + dy.square()).rsqrt().matrix();
}

Eigen::VectorXd GaussianStudy::nonlinear(const Parameter &mu) const
{
  return fem::nonlinear_eval(term_, field(mu), nullptr, mu).value;
}

SnapshotSamples GaussianStudy::snapshots(const sampling::SampleSet &samples) const
{
  SnapshotSamples s;
  s.mu = samples.points;
  s.values.resize(size(), static_cast<Eigen::Index>(samples.size()));
  for (std::size_t n = 0; n < samples.size(); ++n)
    s.values.col(static_cast<Eigen::Index>(n)) = field(samples.points[n]);
  return s;
}

Eigen::MatrixXd GaussianStudy::targets(const sampling::SampleSet &samples, std::size_t first,
                                       std::size_t count) const
{
  Eigen::MatrixXd out(size(), static_cast<Eigen::Index>(count));
  for (std::size_t i = 0; i < count; ++i)
    out.col(static_cast<Eigen::Index>(i)) = nonlinear(samples.points[first + i]);
  return out;
}

}  // namespace eirb::interp
