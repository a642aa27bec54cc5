#pragma once

#include <vector>

#include <Eigen/Core>

#include "eirb/interpolation/candidates.hpp"
#include "eirb/sampling/sampling.hpp"

namespace eirb::interp
{

/// Closed-form parametrized field u(x; mu) = 1 / |x - mu| paired with
/// g(u) = exp(-0.01 u^2), sampled on the truth quadrature of a unit square.
class GaussianStudy
{
public:
  /// Quadrature points of an n x n, degree-p unit-square mesh.
  explicit GaussianStudy(int elements_per_side = 32, int degree = 3);

  const Eigen::MatrixX2d &points() const { return points_; }
  Eigen::Index size() const { return points_.rows(); }
  const fem::NonlinearTerm &term() const { return term_; }

  Eigen::VectorXd field(const Parameter &mu) const;
  Eigen::VectorXd nonlinear(const Parameter &mu) const;

  SnapshotSamples snapshots(const sampling::SampleSet &samples) const;
  /// g values for samples [first, first + count), one column each.
  Eigen::MatrixXd targets(const sampling::SampleSet &samples, std::size_t first, std::size_t count) const;

private:
  Eigen::MatrixX2d points_;
  fem::NonlinearTerm term_ = fem::NonlinearTerm::gaussian();
};

}  // namespace eirb::interp
