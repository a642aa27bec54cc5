#include "eirb/fem/problem.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

namespace eirb::fem
{

std::string to_string(ProblemKind kind)
{
  return kind == ProblemKind::Elliptic ? "elliptic" : "diffusion";
}

ProblemKind problem_from_string(const std::string &name)
{
  if (name == "elliptic")
    return ProblemKind::Elliptic;
  if (name == "diffusion")
    return ProblemKind::Diffusion;
  throw ConfigError("unknown problem '" + name + "'");
}

DiscreteSpace default_space(ProblemKind kind, int coarsen)
{
  if (kind == ProblemKind::Elliptic)
  {
    if (coarsen < 1 || 32 % coarsen != 0)
      throw ConfigError("default_space: coarsening must divide 32");
    const Resolution r{32 / coarsen, 32 / coarsen};
    return DiscreteSpace::build(GeometrySpec::unit_square(), std::span(&r, 1), 3);
  }
  if (coarsen < 1 || 10 % coarsen != 0)
    throw ConfigError("default_space: coarsening must divide 10");
  const std::array<Resolution, 2> r{Resolution{40 / coarsen, 10 / coarsen},
                                    Resolution{10 / coarsen, 50 / coarsen}};
  return DiscreteSpace::build(GeometrySpec::t_shape(), r, 3);
}

TruthModel::TruthModel(const DiscreteSpace &space, ProblemKind kind, double conductivity_floor)
  : space_(&space), kind_(kind), floor_(conductivity_floor), pattern_(space),
    stiffness_(assemble_stiffness(space))
{
  if (kind == ProblemKind::Elliptic)
  {
    load_ = assemble_load(space, SourceFunctional::volume([](const Point &x) {
      return 100.0 * std::sin(2.0 * std::numbers::pi * x[0]) * std::cos(2.0 * std::numbers::pi * x[1]);
    }));
  }
  else
  {
    load_ = assemble_load(space, SourceFunctional::flux([](const Point &) { return 1.0; }));
  }
  output_ = assemble_load(space, SourceFunctional::volume([](const Point &) { return 1.0; }));
}

std::vector<NonlinearTerm> TruthModel::terms() const
{
  if (kind_ == ProblemKind::Elliptic)
    return {NonlinearTerm::elliptic()};
  return {NonlinearTerm::diffusion_g(floor_), NonlinearTerm::diffusion_h(floor_)};
}

Eigen::VectorXd TruthModel::residual(const Eigen::Ref<const Eigen::VectorXd> &u,
                                     const Parameter &mu) const
{
  Eigen::VectorXd r;
  SparseMatrix unused;
  linearize(u, mu, r, unused, false);
  return r;
}

void TruthModel::linearize(const Eigen::Ref<const Eigen::VectorXd> &u, const Parameter &mu,
                           Eigen::VectorXd &residual, SparseMatrix &jacobian, bool eliminate) const
{
  const auto &space = *space_;
  const auto &quad = space.quadrature();
  const int nloc = space.nodes_per_element();
  const int per = quad.points_per_element();
  require(u.size() == space.num_nodes(), "TruthModel: state length mismatch");

  const auto sample = evaluate_coefficients(space, quad, u);
  jacobian = kind_ == ProblemKind::Elliptic ? stiffness_ : pattern_.zero();
  double *jv = jacobian.valuePtr();

  if (kind_ == ProblemKind::Elliptic)
  {
    residual = stiffness_ * u - load_;
    const auto term = NonlinearTerm::elliptic();
    Eigen::MatrixXd local(nloc, nloc);
    for (int e = 0; e < space.num_elements(); ++e)
    {
      auto conn = space.element_nodes(e);
      local.setZero();
      for (int k = 0; k < per; ++k)
      {
        const Eigen::Index q = static_cast<Eigen::Index>(e) * per + k;
        const auto g = term.evaluate(sample.values[q], 0.0, mu);
        const double w = quad.weights[q] * mu[0];
        for (int a = 0; a < nloc; ++a)
          residual[conn[a]] += w * g.value * quad.values(q, a);
        local.noalias() += (w * g.d_u) * (quad.values.row(q).transpose() * quad.values.row(q));
      }
      for (int b = 0; b < nloc; ++b)
        for (int a = 0; a < nloc; ++a)
          jv[pattern_.slot(e, a, b)] += local(a, b);
    }
  }
  else
  {
    residual = -mu[0] * load_;
    const auto term = NonlinearTerm::diffusion_g(floor_);
    Eigen::MatrixXd local(nloc, nloc);
    for (int e = 0; e < space.num_elements(); ++e)
    {
      auto conn = space.element_nodes(e);
      local.setZero();
      for (int k = 0; k < per; ++k)
      {
        const Eigen::Index q = static_cast<Eigen::Index>(e) * per + k;
        const auto [kappa, dkappa, unused] = term.conductivity(sample.values[q], mu);
        const double w = quad.weights[q];
        const auto gx = quad.dx.row(q);
        const auto gy = quad.dy.row(q);
        // flux . grad phi_a
        const Eigen::RowVectorXd proj = sample.dx[q] * gx + sample.dy[q] * gy;
        for (int a = 0; a < nloc; ++a)
          residual[conn[a]] += w * kappa * proj[a];
        local.noalias() += (w * kappa) * (gx.transpose() * gx + gy.transpose() * gy);
        local.noalias() += (w * dkappa) * (proj.transpose() * quad.values.row(q));
      }
      for (int b = 0; b < nloc; ++b)
        for (int a = 0; a < nloc; ++a)
          jv[pattern_.slot(e, a, b)] += local(a, b);
    }
  }

  const auto &mask = space.dirichlet_mask();
  for (Eigen::Index i = 0; i < residual.size(); ++i)
    if (mask[i])
      residual[i] = 0.0;
  if (eliminate)
    pattern_.apply_dirichlet(jacobian, mask);
}

FomResult TruthModel::solve(const Parameter &mu, const NewtonSettings &settings,
                            const Eigen::VectorXd *initial) const
{
  const auto &mask = space_->dirichlet_mask();
  Eigen::VectorXd u = initial ? *initial : Eigen::VectorXd::Zero(space_->num_nodes());
  require(u.size() == space_->num_nodes(), "TruthModel::solve: initial guess length mismatch");
  for (Eigen::Index i = 0; i < u.size(); ++i)
    if (mask[i])
      u[i] = 0.0;

  // The elliptic Jacobian is symmetric (possibly indefinite); LDL^T handles it
  // at a fraction of the LU cost. The diffusion Jacobian is not symmetric.
  Eigen::SimplicialLDLT<SparseMatrix> ldlt;
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  bool use_ldlt = kind_ == ProblemKind::Elliptic;
  bool analyzed = false;
  NewtonReport report;
  Eigen::VectorXd r;
  SparseMatrix jac;
  for (int it = 0;; ++it)
  {
    linearize(u, mu, r, jac);
    const double norm = r.norm();
    report.residual_history.push_back(norm);
    if (!std::isfinite(norm))
      throw SolverError("FOM Newton produced a non-finite residual", report.residual_history);
    if (norm <= settings.tolerance)
    {
      report.converged = true;
      report.iterations = it;
      break;
    }
    if (it >= settings.max_iterations)
      throw SolverError("FOM Newton did not converge", report.residual_history);
    if (use_ldlt)
    {
      if (!analyzed)
        ldlt.analyzePattern(jac);
      analyzed = true;
      ldlt.factorize(jac);
      if (ldlt.info() == Eigen::Success)
      {
        u -= ldlt.solve(r);
        continue;
      }
      use_ldlt = false;
      analyzed = false;
    }
    if (!analyzed)
      lu.analyzePattern(jac);
    analyzed = true;
    lu.factorize(jac);
    if (lu.info() != Eigen::Success)
      throw SolverError("FOM Jacobian factorization failed", report.residual_history);
    u -= lu.solve(r);
  }
  FomResult result;
  result.output = output(u);
  result.field = make_field(*space_, std::move(u));
  result.report = std::move(report);
  return result;
}

FomResult TruthModel::solve_with_continuation(const Parameter &mu,
                                              const NewtonSettings &settings) const
{
  try
  {
    return solve(mu, settings);
  }
  catch (const SolverError &)
  {
  }
  for (int steps : {4, 16, 64})
  {
    try
    {
      Eigen::VectorXd u = Eigen::VectorXd::Zero(space_->num_nodes());
      FomResult last;
      for (int k = 1; k <= steps; ++k)
      {
        const Parameter partial{mu[0] * k / steps, mu[1]};
        last = solve(partial, settings, &u);
        u = last.field.coefficients;
      }
      last.continuation_steps = steps;
      return last;
    }
    catch (const SolverError &)
    {
    }
  }
  throw SolverError("FOM Newton failed even with continuation in mu1", {});
}

FomResult solve_fom(ProblemKind kind, const DiscreteSpace &space, const Parameter &mu,
                    const NewtonSettings &settings)
{
  return TruthModel(space, kind).solve(mu, settings);
}

}  // namespace eirb::fem
