#include "eirb/sampling/snapshots.hpp"

#include <cmath>
#include <sstream>

#include "eirb/parallel.hpp"

namespace eirb::sampling
{

void orthonormalize(SnapshotBasis &basis, const fem::SparseMatrix &inner)
{
  const Eigen::Index n = basis.raw.cols();
  require(basis.raw.rows() == inner.rows(), "orthonormalize: inner product size mismatch");
  Eigen::MatrixXd q(basis.raw.rows(), n);
  Eigen::Index kept = 0;
  basis.dropped.clear();
  for (Eigen::Index j = 0; j < n; ++j)
  {
    Eigen::VectorXd v = basis.raw.col(j);
    const double original = std::sqrt(std::max(0.0, v.dot(inner * v)));
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index i = 0; i < kept; ++i)
        v -= q.col(i).dot(inner * v) * q.col(i);
    const double norm = std::sqrt(std::max(0.0, v.dot(inner * v)));
    if (!(norm > 1e-12 * original))
    {
      basis.dropped.push_back(static_cast<int>(j));
      continue;
    }
    q.col(kept++) = v / norm;
  }
  basis.orthonormal = q.leftCols(kept);
  const Eigen::MatrixXd gram = basis.orthonormal.transpose() * (inner * basis.orthonormal);
  basis.gram_check = (gram - Eigen::MatrixXd::Identity(kept, kept)).cwiseAbs().maxCoeff();
  if (kept == 0)
    basis.gram_check = 0.0;
}

SnapshotBasis compute_snapshot_basis(const SampleSet &samples, const fem::TruthModel &model,
                                     const NewtonSettings &settings)
{
  const Eigen::Index n = static_cast<Eigen::Index>(samples.size());
  SnapshotBasis basis;
  basis.samples = samples;
  basis.raw.resize(model.space().num_nodes(), n);
  basis.outputs.resize(n);
  parallel_for(samples.size(), [&](std::size_t i) {
    const auto &mu = samples.points[i];
    try
    {
      auto result = model.solve_with_continuation(mu, settings);
      basis.raw.col(static_cast<Eigen::Index>(i)) = result.field.coefficients;
      basis.outputs[static_cast<Eigen::Index>(i)] = result.output;
    }
    catch (const SolverError &e)
    {
      std::ostringstream os;
      os << "snapshot solve failed at mu = (" << mu[0] << ", " << mu[1] << "): " << e.what();
      throw SolverError(os.str(), e.residual_history);
    }
  });
  orthonormalize(basis, model.stiffness());
  return basis;
}

}  // namespace eirb::sampling
