#include "eirb/interpolation/candidates.hpp"

#include <algorithm>
#include <cmath>

#include "eirb/parallel.hpp"

namespace eirb::interp
{

namespace
{

const Eigen::MatrixXd *gradient_matrix(const SnapshotSamples &s, const fem::NonlinearTerm &term)
{
  const int c = term.gradient_component();
  if (c < 0)
    return nullptr;
  const Eigen::MatrixXd &g = c == 0 ? s.dx : s.dy;
  require(g.rows() == s.values.rows() && g.cols() == s.values.cols(),
          "snapshot gradients missing for a gradient-dependent term");
  return &g;
}

void check_samples(const SnapshotSamples &s)
{
  require(static_cast<std::size_t>(s.values.cols()) == s.mu.size(),
          "snapshot count does not match parameter count");
}

/// Streaming Gram-Schmidt filter: candidates arrive in order, kept ones are
/// stored verbatim together with an orthonormal basis of their span.
class IndependenceFilter
{
public:
  IndependenceFilter(Eigen::Index rows, double rank_tol) : rows_(rows), rank_tol_(rank_tol) {}

  /// Processes the columns of `block`; `index` holds their original positions.
  void push(Eigen::MatrixXd block, const std::vector<Eigen::Index> &index)
  {
    const Eigen::Index b = block.cols();
    if (b == 0)
      return;
    reserve(kept_count_ + b);
    const Eigen::VectorXd norms = block.colwise().norm().transpose();
    Eigen::MatrixXd originals = block;
    if (kept_count_ > 0)
    {
      const auto q = basis_.leftCols(kept_count_);
      for (int pass = 0; pass < 2; ++pass)
      {
        const Eigen::MatrixXd h = q.transpose() * block;
        block.noalias() -= q * h;
      }
    }
    const Eigen::Index start = kept_count_;
    for (Eigen::Index j = 0; j < b; ++j)
    {
      auto v = block.col(j);
      const Eigen::Index fresh = kept_count_ - start;
      if (fresh > 0)
      {
        const auto q = basis_.middleCols(start, fresh);
        for (int pass = 0; pass < 2; ++pass)
        {
          const Eigen::VectorXd h = q.transpose() * v;
          v.noalias() -= q * h;
        }
      }
      const double r = v.norm();
      if (r > rank_tol_ * norms[j])
      {
        basis_.col(kept_count_) = v / r;
        kept_values_.col(kept_count_) = originals.col(j);
        kept_.push_back(index[j]);
        ++kept_count_;
      }
      else
        ++dependent_;
    }
  }

  IndependentSubset finish(Eigen::Index zero_dropped) &&
  {
    IndependentSubset out;
    out.space.kind = SpaceKind::Taylor;
    out.space.values = kept_values_.leftCols(kept_count_);
    out.space.labels.reserve(kept_.size());
    for (auto j : kept_)
      out.space.labels.push_back("theta[" + std::to_string(j) + "]");
    out.kept = std::move(kept_);
    out.zero_dropped = zero_dropped;
    out.dependent_dropped = dependent_;
    return out;
  }

private:
  void reserve(Eigen::Index cols)
  {
    if (cols <= basis_.cols())
      return;
    const Eigen::Index grow = std::max(cols, 2 * basis_.cols());
    basis_.conservativeResize(rows_, grow);
    kept_values_.conservativeResize(rows_, grow);
  }

  Eigen::Index rows_;
  double rank_tol_;
  Eigen::MatrixXd basis_;
  Eigen::MatrixXd kept_values_;
  Eigen::Index kept_count_ = 0;
  Eigen::Index dependent_ = 0;
  std::vector<Eigen::Index> kept_;
};

constexpr Eigen::Index kBlock = 64;

}  // namespace

CandidateSpace CandidateSpace::combine(const CandidateSpace &first, const CandidateSpace &second)
{
  require(first.points() == second.points() || first.size() == 0 || second.size() == 0,
          "combine: evaluation sets differ");
  CandidateSpace out;
  out.kind = SpaceKind::LagrangeTaylor;
  const Eigen::Index rows = std::max(first.points(), second.points());
  out.values.resize(rows, first.size() + second.size());
  out.values.leftCols(first.size()) = first.values;
  out.values.rightCols(second.size()) = second.values;
  out.labels = first.labels;
  out.labels.insert(out.labels.end(), second.labels.begin(), second.labels.end());
  return out;
}

CandidateSpace snapshot_nonlinear(const SnapshotSamples &snapshots, const fem::NonlinearTerm &term)
{
  check_samples(snapshots);
  const Eigen::MatrixXd *grad = gradient_matrix(snapshots, term);
  CandidateSpace out;
  out.kind = SpaceKind::Lagrange;
  out.values.resize(snapshots.values.rows(), snapshots.size());
  for (Eigen::Index n = 0; n < snapshots.size(); ++n)
  {
    Eigen::VectorXd g;
    if (grad)
      g = grad->col(n);
    out.values.col(n) =
      fem::nonlinear_eval(term, snapshots.values.col(n), grad ? &g : nullptr, snapshots.mu[n]).value;
    out.labels.push_back("xi[" + std::to_string(n) + "]");
  }
  return out;
}

SnapshotDerivatives snapshot_derivatives(const SnapshotSamples &snapshots,
                                         const fem::NonlinearTerm &term)
{
  check_samples(snapshots);
  const Eigen::MatrixXd *grad = gradient_matrix(snapshots, term);
  SnapshotDerivatives out;
  out.at.reserve(snapshots.size());
  for (Eigen::Index n = 0; n < snapshots.size(); ++n)
  {
    Eigen::VectorXd g;
    if (grad)
      g = grad->col(n);
    out.at.push_back(
      fem::nonlinear_eval(term, snapshots.values.col(n), grad ? &g : nullptr, snapshots.mu[n]));
  }
  return out;
}

void taylor_function(const SnapshotSamples &snapshots, const SnapshotDerivatives &derivatives,
                     const fem::NonlinearTerm &term, Eigen::Index j,
                     Eigen::Ref<Eigen::VectorXd> out)
{
  const Eigen::Index n_snap = snapshots.size();
  require(j >= 0 && j < 2 * n_snap * n_snap, "taylor_function: index out of range");
  const bool second = j >= n_snap * n_snap;
  const Eigen::Index local = second ? j - n_snap * n_snap : j;
  const Eigen::Index n = local / n_snap;
  const Eigen::Index k = local % n_snap;
  const auto &d = derivatives.at[n];
  if (!second)
  {
    out = d.d_u.cwiseProduct(snapshots.values.col(k) - snapshots.values.col(n));
    if (const Eigen::MatrixXd *grad = gradient_matrix(snapshots, term))
      out += d.d_grad.cwiseProduct(grad->col(k) - grad->col(n));
  }
  else
  {
    const double d1 = snapshots.mu[k][0] - snapshots.mu[n][0];
    const double d2 = snapshots.mu[k][1] - snapshots.mu[n][1];
    out = d.d_mu.col(0) * d1 + d.d_mu.col(1) * d2;
  }
}

Eigen::MatrixXd taylor_candidates(const SnapshotSamples &snapshots, const fem::NonlinearTerm &term)
{
  const auto derivatives = snapshot_derivatives(snapshots, term);
  const Eigen::Index n = snapshots.size();
  Eigen::MatrixXd out(snapshots.values.rows(), 2 * n * n);
  for (Eigen::Index j = 0; j < out.cols(); ++j)
    taylor_function(snapshots, derivatives, term, j, out.col(j));
  return out;
}

IndependentSubset independent_subset(const Eigen::Ref<const Eigen::MatrixXd> &candidates,
                                     const SubsetTolerances &tol)
{
  const Eigen::Index count = candidates.cols();
  Eigen::VectorXd sup(count);
  for (Eigen::Index j = 0; j < count; ++j)
    sup[j] = count ? candidates.col(j).cwiseAbs().maxCoeff() : 0.0;
  const double largest = count ? sup.maxCoeff() : 0.0;
  IndependenceFilter filter(candidates.rows(), tol.rank_tol);
  Eigen::Index zero = 0;
  std::vector<Eigen::Index> index;
  for (Eigen::Index j = 0; j < count;)
  {
    index.clear();
    for (; j < count && static_cast<Eigen::Index>(index.size()) < kBlock; ++j)
    {
      if (!(sup[j] >= tol.zero_tol * largest) || largest == 0.0)
        ++zero;
      else
        index.push_back(j);
    }
    Eigen::MatrixXd block(candidates.rows(), static_cast<Eigen::Index>(index.size()));
    for (std::size_t i = 0; i < index.size(); ++i)
      block.col(static_cast<Eigen::Index>(i)) = candidates.col(index[i]);
    filter.push(std::move(block), index);
  }
  return std::move(filter).finish(zero);
}

IndependentSubset build_taylor_space(const SnapshotSamples &snapshots,
                                     const fem::NonlinearTerm &term, const SubsetTolerances &tol)
{
  const auto derivatives = snapshot_derivatives(snapshots, term);
  const Eigen::Index n = snapshots.size();
  const Eigen::Index count = 2 * n * n;
  const Eigen::Index rows = snapshots.values.rows();

  // First pass: sup-norms only, to fix the zero-drop threshold.
  Eigen::VectorXd sup(count);
  parallel_for(static_cast<std::size_t>(count), [&](std::size_t j) {
    Eigen::VectorXd v(rows);
    taylor_function(snapshots, derivatives, term, static_cast<Eigen::Index>(j), v);
    sup[static_cast<Eigen::Index>(j)] = v.cwiseAbs().maxCoeff();
  });
  const double largest = count ? sup.maxCoeff() : 0.0;

  IndependenceFilter filter(rows, tol.rank_tol);
  Eigen::Index zero = 0;
  std::vector<Eigen::Index> index;
  for (Eigen::Index j = 0; j < count;)
  {
    index.clear();
    for (; j < count && static_cast<Eigen::Index>(index.size()) < kBlock; ++j)
    {
      if (!(sup[j] >= tol.zero_tol * largest) || largest == 0.0)
        ++zero;
      else
        index.push_back(j);
    }
    Eigen::MatrixXd block(rows, static_cast<Eigen::Index>(index.size()));
    parallel_for(index.size(), [&](std::size_t i) {
      taylor_function(snapshots, derivatives, term, index[i], block.col(static_cast<Eigen::Index>(i)));
    });
    filter.push(std::move(block), index);
  }
  return std::move(filter).finish(zero);
}

}  // namespace eirb::interp
