#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "eirb/common.hpp"
#include "eirb/fem/problem.hpp"
#include "eirb/interpolation/candidates.hpp"
#include "eirb/interpolation/system.hpp"
#include "eirb/sampling/snapshots.hpp"

namespace eirb::rom
{

/// Raw snapshots and their gradients at the truth quadrature points.
interp::SnapshotSamples sample_snapshots(const fem::DiscreteSpace &space,
                                         const sampling::SnapshotBasis &basis);

/// Parameter-independent projections shared by both reduced models.
struct ReducedBasis
{
  Eigen::MatrixXd basis;      // nodes x N, X-orthonormal
  Eigen::MatrixXd stiffness;  // A_N = Z^T K Z
  Eigen::VectorXd load;       // elliptic: f(zeta_j); diffusion: int_{Gamma_Q} zeta_j
  Eigen::VectorXd output;     // L_N = int zeta_j

  Eigen::Index size() const { return basis.cols(); }
};

ReducedBasis build_standard_rb(const fem::TruthModel &model, const sampling::SnapshotBasis &basis);

struct RomSolution
{
  Eigen::VectorXd alpha;
  std::vector<Eigen::VectorXd> interpolation;  // one coefficient vector per interpolated term
  double output = 0.0;
  NewtonReport report;
};

/// Galerkin projection of the truth problem. Every Newton step assembles the
/// truth residual and Jacobian at Z alpha, so its cost scales with the mesh.
class StandardRb
{
public:
  StandardRb(const fem::TruthModel &model, ReducedBasis reduced);

  const ReducedBasis &reduced() const { return reduced_; }
  Eigen::Index size() const { return reduced_.size(); }

  void linearize(const Eigen::Ref<const Eigen::VectorXd> &alpha, const Parameter &mu,
                 Eigen::VectorXd &residual, Eigen::MatrixXd &jacobian) const;

  /// Newton from `initial` (zero when null); throws SolverError on divergence.
  RomSolution solve(const Parameter &mu, const NewtonSettings &settings = {},
                    const Eigen::VectorXd *initial = nullptr) const;

private:
  const fem::TruthModel *model_;
  ReducedBasis reduced_;
};

/// One interpolated nonlinearity of the online problem. Only N- and M-sized data.
struct InterpolatedTerm
{
  fem::NonlinearTerm term;
  Eigen::MatrixXd interaction;     // E = C B^{-1}, N x M
  Eigen::MatrixXd basis_at_points;  // M x N, zeta_i(x_k)
  Eigen::MatrixXd gradient_at_points;  // M x N, d zeta_i / dx_c (x_k); empty when unused
  Eigen::MatrixXd interpolation_matrix;  // B, M x M unit lower triangular
};

/// Operator bundle of the empirical-interpolation reduced model.
struct EiOperators
{
  fem::ProblemKind kind = fem::ProblemKind::Elliptic;
  Eigen::MatrixXd stiffness;  // A_N, elliptic only
  Eigen::VectorXd load;
  Eigen::VectorXd output;
  std::vector<InterpolatedTerm> terms;

  Eigen::Index size() const { return load.size(); }
};

/// One interpolation system per nonlinear term of the model, in the order of
/// TruthModel::terms(), all built on the truth quadrature points.
EiOperators build_ei_rb(const fem::TruthModel &model, const ReducedBasis &reduced,
                        const std::vector<const interp::InterpolationSystem *> &systems);

/// Online residual and exact Jacobian of the interpolated system at alpha.
void ei_linearize(const EiOperators &ops, const Eigen::Ref<const Eigen::VectorXd> &alpha,
                  const Parameter &mu, Eigen::VectorXd &residual, Eigen::MatrixXd &jacobian,
                  std::vector<Eigen::VectorXd> *coefficients = nullptr);

/// Newton from `initial` (zero when null) with cost O(M N^2 + N^3) per
/// iteration; throws SolverError on divergence.
RomSolution solve_ei_rb(const EiOperators &ops, const Parameter &mu, const NewtonSettings &settings = {},
                        const Eigen::VectorXd *initial = nullptr);

using ReducedSolve = std::function<RomSolution(const Parameter &, const Eigen::VectorXd *initial)>;

/// Direct solve from zero; on failure, a homotopy in mu1 starting at zero with
/// 4 and then 16 steps. `steps` receives the step count used (0 when direct).
RomSolution solve_with_homotopy(const ReducedSolve &solve, const Parameter &mu, int &steps);

}  // namespace eirb::rom
