#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "eirb/common.hpp"
#include "eirb/fem/nonlinear.hpp"

namespace eirb::interp
{

enum class SpaceKind
{
  Lagrange,       // snapshots xi_n = g(zeta_n, mu_n)
  Taylor,         // independent first-order Taylor terms
  LagrangeTaylor  // direct sum of the two
};

/// Ordered list of discrete functions sampled on a fixed evaluation point
/// set; column j is function j.
struct CandidateSpace
{
  Eigen::MatrixXd values;
  std::vector<std::string> labels;
  SpaceKind kind = SpaceKind::Lagrange;

  Eigen::Index size() const { return values.cols(); }
  Eigen::Index points() const { return values.rows(); }

  /// Lagrange-Taylor space: columns of `first` followed by those of `second`.
  static CandidateSpace combine(const CandidateSpace &first, const CandidateSpace &second);
};

/// Snapshot fields and their gradients at the evaluation points, together
/// with the parameters they were computed at. Columns follow the sample set.
struct SnapshotSamples
{
  Eigen::MatrixXd values;
  Eigen::MatrixXd dx;  // may be empty when no term needs gradients
  Eigen::MatrixXd dy;
  std::vector<Parameter> mu;

  Eigen::Index size() const { return values.cols(); }
};

/// xi_n(x) = g(zeta_n(x), mu_n) at every evaluation point.
CandidateSpace snapshot_nonlinear(const SnapshotSamples &snapshots, const fem::NonlinearTerm &term);

/// Pointwise derivatives of the term at every snapshot, reused by the Taylor builders.
struct SnapshotDerivatives
{
  std::vector<fem::TermSamples> at;  // one per snapshot n
};

SnapshotDerivatives snapshot_derivatives(const SnapshotSamples &snapshots,
                                         const fem::NonlinearTerm &term);

/// Taylor function with flat index j in [0, 2N^2):
///   j = (n-1)N + (k-1):        g_u(zeta_n, mu_n) (zeta_k - zeta_n)
///                              + g_grad(zeta_n, mu_n) (d zeta_k - d zeta_n)
///   j = N^2 + (n-1)N + (k-1):  g_mu(zeta_n, mu_n) . (mu_k - mu_n)
/// The gradient term only appears for gradient-dependent fluxes.
void taylor_function(const SnapshotSamples &snapshots, const SnapshotDerivatives &derivatives,
                     const fem::NonlinearTerm &term, Eigen::Index j,
                     Eigen::Ref<Eigen::VectorXd> out);

/// All 2N^2 Taylor functions before filtering (points x 2N^2).
Eigen::MatrixXd taylor_candidates(const SnapshotSamples &snapshots, const fem::NonlinearTerm &term);

struct SubsetTolerances
{
  /// Functions with sup-norm below zero_tol * (largest candidate sup-norm) are dropped.
  double zero_tol = 1e-12;
  /// A function is kept when its residual after projection onto the kept set
  /// exceeds rank_tol times its own norm (Euclidean over the points).
  double rank_tol = 1e-10;
};

/// Result of the greedy independence filter: kept columns in input order.
struct IndependentSubset
{
  CandidateSpace space;  // kind Taylor
  std::vector<Eigen::Index> kept;
  Eigen::Index zero_dropped = 0;
  Eigen::Index dependent_dropped = 0;
};

IndependentSubset independent_subset(const Eigen::Ref<const Eigen::MatrixXd> &candidates,
                                     const SubsetTolerances &tol = {});

/// Streams the 2N^2 Taylor functions through the independence filter without
/// materializing the full candidate matrix. Same result as
/// independent_subset(taylor_candidates(...)).
IndependentSubset build_taylor_space(const SnapshotSamples &snapshots,
                                     const fem::NonlinearTerm &term,
                                     const SubsetTolerances &tol = {});

}  // namespace eirb::interp
