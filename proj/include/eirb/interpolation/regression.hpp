#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "eirb/interpolation/system.hpp"

namespace eirb::interp
{

/// Least-squares fit of N basis functions to samples at M >= N points.
class RegressionSystem
{
public:
  /// First n basis functions and all points of `system`. Throws ConfigError
  /// when the N x M sample matrix is rank deficient.
  RegressionSystem(const InterpolationSystem &system, Eigen::Index n);

  Eigen::Index size() const { return basis_.cols(); }
  Eigen::Index num_points() const { return static_cast<Eigen::Index>(points_.size()); }
  const std::vector<Eigen::Index> &points() const { return points_; }
  const Eigen::MatrixXd &basis() const { return basis_; }
  /// N x M solution operator.
  const Eigen::MatrixXd &solution_operator() const { return operator_; }

  Eigen::VectorXd coefficients(const Eigen::Ref<const Eigen::VectorXd> &samples) const;
  Eigen::MatrixXd coefficient_block(const Eigen::Ref<const Eigen::MatrixXd> &samples) const;
  Eigen::MatrixXd sample(const Eigen::Ref<const Eigen::MatrixXd> &functions) const;

private:
  std::vector<Eigen::Index> points_;
  Eigen::MatrixXd basis_;
  Eigen::MatrixXd operator_;
};

/// max_x sum_k |(Psi_N C)(x, k)|, the sup-norm of the regression operator.
double lebesgue_constant(const RegressionSystem &system);

/// Per-parameter sup-norm errors and their maximum.
struct InterpolationError
{
  double max = 0.0;
  std::vector<double> per_sample;
};

/// Errors of an approximation for a block of target functions (columns).
std::vector<double> approximation_errors(const InterpolationSystem &system,
                                         const Eigen::Ref<const Eigen::MatrixXd> &targets);
std::vector<double> approximation_errors(const RegressionSystem &system,
                                         const Eigen::Ref<const Eigen::MatrixXd> &targets);

/// Produces the nonlinear term values at every evaluation point for test
/// samples [first, first + count), one column each.
using TargetProvider = std::function<Eigen::MatrixXd(std::size_t first, std::size_t count)>;

InterpolationError max_interp_error(const InterpolationSystem &system, std::size_t test_count,
                                    const TargetProvider &targets, std::size_t block = 32);
InterpolationError max_interp_error(const RegressionSystem &system, std::size_t test_count,
                                    const TargetProvider &targets, std::size_t block = 32);

}  // namespace eirb::interp
