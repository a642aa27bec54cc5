#include "eirb/interpolation/regression.hpp"

#include <algorithm>

#include <Eigen/Dense>

namespace eirb::interp
{

namespace
{

template <typename System>
std::vector<double> errors_of(const System &system, const Eigen::Ref<const Eigen::MatrixXd> &targets)
{
  const Eigen::MatrixXd approx = system.basis() * system.coefficient_block(system.sample(targets));
  std::vector<double> out(static_cast<std::size_t>(targets.cols()));
  for (Eigen::Index j = 0; j < targets.cols(); ++j)
    out[static_cast<std::size_t>(j)] = (targets.col(j) - approx.col(j)).cwiseAbs().maxCoeff();
  return out;
}

template <typename System>
InterpolationError max_error_of(const System &system, std::size_t test_count,
                                const TargetProvider &targets, std::size_t block)
{
  InterpolationError out;
  out.per_sample.reserve(test_count);
  block = std::max<std::size_t>(block, 1);
  for (std::size_t first = 0; first < test_count; first += block)
  {
    const std::size_t count = std::min(block, test_count - first);
    const Eigen::MatrixXd values = targets(first, count);
    require(static_cast<std::size_t>(values.cols()) == count, "target provider returned wrong block");
    for (double e : errors_of(system, values))
      out.per_sample.push_back(e);
  }
  for (double e : out.per_sample)
    out.max = std::max(out.max, e);
  return out;
}

}  // namespace

RegressionSystem::RegressionSystem(const InterpolationSystem &system, Eigen::Index n)
{
  require(n >= 1 && n <= system.size(), "regression: need 1 <= N <= M");
  points_ = system.points();
  basis_ = system.basis().leftCols(n);
  // Least squares for B_NM^T beta ~ b through a QR of the M x N matrix.
  const Eigen::MatrixXd design = system.matrix().leftCols(n);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(design);
  const Eigen::VectorXd diag = qr.matrixQR().diagonal().cwiseAbs();
  if (!(diag.minCoeff() > 1e-12 * diag.maxCoeff()))
    throw ConfigError("regression: sample matrix is rank deficient");
  const Eigen::Index m = design.rows();
  const Eigen::MatrixXd qt = qr.householderQ().transpose() * Eigen::MatrixXd::Identity(m, m);
  operator_ = qr.matrixQR().topLeftCorner(n, n).triangularView<Eigen::Upper>().solve(qt.topRows(n));
}

Eigen::VectorXd RegressionSystem::coefficients(const Eigen::Ref<const Eigen::VectorXd> &samples) const
{
  require(samples.size() == num_points(), "regression: sample length must equal point count");
  return operator_ * samples;
}

Eigen::MatrixXd RegressionSystem::coefficient_block(const Eigen::Ref<const Eigen::MatrixXd> &samples) const
{
  require(samples.rows() == num_points(), "regression: sample length must equal point count");
  return operator_ * samples;
}

Eigen::MatrixXd RegressionSystem::sample(const Eigen::Ref<const Eigen::MatrixXd> &functions) const
{
  Eigen::MatrixXd out(num_points(), functions.cols());
  for (Eigen::Index k = 0; k < num_points(); ++k)
    out.row(k) = functions.row(points_[k]);
  return out;
}

std::vector<double> approximation_errors(const InterpolationSystem &system,
                                         const Eigen::Ref<const Eigen::MatrixXd> &targets)
{
  return errors_of(system, targets);
}

std::vector<double> approximation_errors(const RegressionSystem &system,
                                         const Eigen::Ref<const Eigen::MatrixXd> &targets)
{
  return errors_of(system, targets);
}

InterpolationError max_interp_error(const InterpolationSystem &system, std::size_t test_count,
                                    const TargetProvider &targets, std::size_t block)
{
  return max_error_of(system, test_count, targets, block);
}

InterpolationError max_interp_error(const RegressionSystem &system, std::size_t test_count,
                                    const TargetProvider &targets, std::size_t block)
{
  return max_error_of(system, test_count, targets, block);
}

double lebesgue_constant(const RegressionSystem &system)
{
  if (system.size() == 0)
    return 0.0;
  const Eigen::MatrixXd cardinal = system.basis() * system.solution_operator();
  return cardinal.cwiseAbs().rowwise().sum().maxCoeff();
}

}  // namespace eirb::interp
