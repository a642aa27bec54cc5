#pragma once

#include <vector>

#include <Eigen/Core>

#include "eirb/fem/problem.hpp"
#include "eirb/sampling/sampling.hpp"

namespace eirb::sampling
{

/// Truth snapshots zeta_n = u(mu_n) and an X-orthonormal basis of their span.
struct SnapshotBasis
{
  SampleSet samples;
  Eigen::MatrixXd raw;          // nodes x N, column n = u(mu_n)
  Eigen::VectorXd outputs;      // s(mu_n)
  Eigen::MatrixXd orthonormal;  // nodes x N' (N' <= N)
  std::vector<int> dropped;     // raw columns removed as numerically dependent
  double gram_check = 0.0;      // max |(q_i, q_j)_X - delta_ij|

  Eigen::Index size() const { return orthonormal.cols(); }
};

/// Modified Gram-Schmidt in the (w,v) = w^T A v inner product with one
/// re-orthogonalization pass. Columns whose norm falls below 1e-12 of the
/// original are dropped and recorded. Fills orthonormal, dropped, gram_check.
void orthonormalize(SnapshotBasis &basis, const fem::SparseMatrix &inner);

/// Solves the truth problem at every sample (with mu1-continuation as a
/// fallback) and orthonormalizes. A failure at any sample throws SolverError
/// naming the parameter.
SnapshotBasis compute_snapshot_basis(const SampleSet &samples, const fem::TruthModel &model,
                                     const NewtonSettings &settings = {});

}  // namespace eirb::sampling
