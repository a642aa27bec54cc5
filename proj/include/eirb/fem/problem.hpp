#pragma once

#include <string>

#include <Eigen/Core>

#include "eirb/fem/assembly.hpp"
#include "eirb/fem/field.hpp"
#include "eirb/fem/nonlinear.hpp"

namespace eirb::fem
{

enum class ProblemKind
{
  /// -lap u + mu1 exp(sin(mu2 u)) = 100 sin(2 pi x1) cos(2 pi x2) on the unit
  /// square, u = 0 on the boundary. mu in [1,10]^2.
  Elliptic,
  /// -div(kappa(u, mu) grad u) = 0 on the T-shape, u = 0 on the top edge,
  /// flux mu1 on the stem bottom, insulated elsewhere. mu in [1,10]x[0,10].
  Diffusion
};

std::string to_string(ProblemKind kind);
ProblemKind problem_from_string(const std::string &name);

struct FomResult
{
  Field field;
  double output = 0.0;
  NewtonReport report;
  int continuation_steps = 0;
};

/// Truth (finite element) model of one of the two nonlinear problems on a
/// fixed space. Holds the parameter-independent operators; immutable after
/// construction and safe to share between threads.
class TruthModel
{
public:
  TruthModel(const DiscreteSpace &space, ProblemKind kind,
             double conductivity_floor = kDefaultConductivityFloor);

  const DiscreteSpace &space() const { return *space_; }
  ProblemKind kind() const { return kind_; }
  double conductivity_floor() const { return floor_; }

  /// Nonlinear terms entering the weak form: {elliptic-g} or {diffusion-g, diffusion-h}.
  std::vector<NonlinearTerm> terms() const;

  /// Stiffness a(phi_i, phi_j), no boundary elimination.
  const SparseMatrix &stiffness() const { return stiffness_; }
  /// Elliptic: f(phi_j). Diffusion: int_{Gamma_Q} phi_j (unit flux).
  const Eigen::VectorXd &load() const { return load_; }
  /// int_Omega phi_j, so that s(u) = output_functional . u.
  const Eigen::VectorXd &output_functional() const { return output_; }

  /// Residual of the discrete weak form at u (rows of Dirichlet nodes zeroed).
  Eigen::VectorXd residual(const Eigen::Ref<const Eigen::VectorXd> &u, const Parameter &mu) const;

  /// Residual and Jacobian. With `eliminate` the Jacobian gets identity rows
  /// and columns on Dirichlet nodes; otherwise it is the raw derivative.
  void linearize(const Eigen::Ref<const Eigen::VectorXd> &u, const Parameter &mu,
                 Eigen::VectorXd &residual, SparseMatrix &jacobian, bool eliminate = true) const;

  /// Newton from `initial` (zero when empty). Throws SolverError after
  /// max_iterations without reaching the tolerance.
  FomResult solve(const Parameter &mu, const NewtonSettings &settings = {},
                  const Eigen::VectorXd *initial = nullptr) const;

  /// solve(), retried with a homotopy in mu1 from the linear problem when the
  /// plain iteration fails.
  FomResult solve_with_continuation(const Parameter &mu, const NewtonSettings &settings = {}) const;

  double output(const Eigen::Ref<const Eigen::VectorXd> &u) const { return output_.dot(u); }

private:
  const DiscreteSpace *space_;
  ProblemKind kind_;
  double floor_;
  SparsePattern pattern_;
  SparseMatrix stiffness_;
  Eigen::VectorXd load_;
  Eigen::VectorXd output_;
};

/// Convenience wrapper building a TruthModel for one solve.
FomResult solve_fom(ProblemKind kind, const DiscreteSpace &space, const Parameter &mu,
                    const NewtonSettings &settings = {});

/// The reference space: 32x32 cubic unit square or the
/// 900-element cubic T-shape, optionally coarsened by an integer factor.
DiscreteSpace default_space(ProblemKind kind, int coarsen = 1);

}  // namespace eirb::fem
