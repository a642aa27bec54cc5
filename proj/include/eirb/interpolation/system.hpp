#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "eirb/interpolation/candidates.hpp"

namespace eirb::interp
{

enum class BuildStatus
{
  Complete,
  Exhausted  // residual fell below the exhaustion threshold before reaching M
};

/// One greedy step: chosen candidate (index into the space used in that
/// phase), chosen point and the residual sup-norm that selected them.
struct StepRecord
{
  Eigen::Index candidate = 0;
  Eigen::Index point = 0;
  double residual = 0.0;
  int phase = 0;  // 0 for the first candidate space, 1 for a continuation
};

/// Interpolation points, nodal basis and the unit lower-triangular matrix
/// B(k, m) = basis_m(point_k).
class InterpolationSystem
{
public:
  InterpolationSystem() = default;
  explicit InterpolationSystem(Eigen::Index evaluation_points);

  Eigen::Index size() const { return static_cast<Eigen::Index>(points_.size()); }
  Eigen::Index evaluation_points() const { return basis_.rows(); }

  const std::vector<Eigen::Index> &points() const { return points_; }
  /// evaluation_points x size()
  const Eigen::MatrixXd &basis() const { return basis_; }
  const Eigen::MatrixXd &matrix() const { return b_; }
  const std::vector<StepRecord> &log() const { return log_; }
  BuildStatus status() const { return status_; }

  /// First m points and basis functions. Exact because B is triangular.
  InterpolationSystem truncated(Eigen::Index m) const;

  /// beta = B^{-1} b by forward substitution.
  Eigen::VectorXd coefficients(const Eigen::Ref<const Eigen::VectorXd> &samples) const;
  Eigen::MatrixXd coefficient_block(const Eigen::Ref<const Eigen::MatrixXd> &samples) const;

  /// sum_m beta_m basis_m over all evaluation points.
  Eigen::VectorXd values(const Eigen::Ref<const Eigen::VectorXd> &beta) const;
  /// Same, restricted to the given evaluation indices.
  Eigen::VectorXd values(const Eigen::Ref<const Eigen::VectorXd> &beta,
                         const std::vector<Eigen::Index> &at) const;

  /// Samples of column-wise functions at the interpolation points.
  Eigen::MatrixXd sample(const Eigen::Ref<const Eigen::MatrixXd> &functions) const;

  /// Appends greedy steps selected from `candidates` until size() == target
  /// or the candidates are exhausted.
  void extend(const Eigen::Ref<const Eigen::MatrixXd> &candidates, Eigen::Index target, int phase);

  /// Binary bundle: points, their coordinates, B, basis and the step log.
  void save(const std::string &path, const Eigen::MatrixX2d &coords) const;
  static InterpolationSystem load(const std::string &path);

private:
  void append(Eigen::Index point, const Eigen::Ref<const Eigen::VectorXd> &basis_function);

  std::vector<Eigen::Index> points_;
  Eigen::MatrixXd basis_;
  Eigen::MatrixXd b_;
  std::vector<StepRecord> log_;
  BuildStatus status_ = BuildStatus::Complete;
};

/// Residual sup-norm, relative to the largest candidate sup-norm, below which
/// the greedy stops.
inline constexpr double kExhaustedTol = 1e-13;

/// Plain EIM greedy over a candidate space.
InterpolationSystem eim_greedy(const CandidateSpace &candidates, Eigen::Index m);

/// EIM over the Lagrange space for the first min(M, N) steps, continued over
/// the Taylor space.
InterpolationSystem foeim1_construct(const CandidateSpace &lagrange, const CandidateSpace &taylor,
                                     Eigen::Index m);

/// EIM over the combined Lagrange-Taylor space.
InterpolationSystem foeim2_construct(const CandidateSpace &lagrange, const CandidateSpace &taylor,
                                     Eigen::Index m);

/// max_x sum_k |(Psi B^{-1})(x, k)|.
double lebesgue_constant(const InterpolationSystem &system);

}  // namespace eirb::interp
