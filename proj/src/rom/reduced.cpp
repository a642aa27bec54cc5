#include "eirb/rom/reduced.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "eirb/fem/field.hpp"

namespace eirb::rom
{

namespace
{

template <typename Linearize>
RomSolution newton(Eigen::Index n, const NewtonSettings &settings, const Eigen::VectorXd *initial,
                   Linearize &&linearize, const char *what)
{
  RomSolution sol;
  sol.alpha = initial ? *initial : Eigen::VectorXd::Zero(n);
  require(sol.alpha.size() == n, "reduced Newton: initial guess has wrong length");
  Eigen::VectorXd r;
  Eigen::MatrixXd j;
  for (int it = 0;; ++it)
  {
    linearize(sol.alpha, r, j);
    const double norm = r.norm();
    sol.report.residual_history.push_back(norm);
    if (!std::isfinite(norm))
      throw SolverError(std::string(what) + " Newton produced a non-finite residual",
                        sol.report.residual_history);
    if (norm <= settings.tolerance)
    {
      sol.report.converged = true;
      sol.report.iterations = it;
      return sol;
    }
    if (it >= settings.max_iterations)
      throw SolverError(std::string(what) + " Newton did not converge", sol.report.residual_history);
    sol.alpha -= j.partialPivLu().solve(r);
  }
}

}  // namespace

interp::SnapshotSamples sample_snapshots(const fem::DiscreteSpace &space,
                                         const sampling::SnapshotBasis &basis)
{
  auto cols = fem::evaluate_columns(space, space.quadrature(), basis.raw);
  interp::SnapshotSamples s;
  s.values = std::move(cols.values);
  s.dx = std::move(cols.dx);
  s.dy = std::move(cols.dy);
  s.mu = basis.samples.points;
  return s;
}

ReducedBasis build_standard_rb(const fem::TruthModel &model, const sampling::SnapshotBasis &basis)
{
  ReducedBasis rb;
  rb.basis = basis.orthonormal;
  rb.stiffness = rb.basis.transpose() * (model.stiffness() * rb.basis);
  rb.load = rb.basis.transpose() * model.load();
  rb.output = rb.basis.transpose() * model.output_functional();
  return rb;
}

StandardRb::StandardRb(const fem::TruthModel &model, ReducedBasis reduced)
  : model_(&model), reduced_(std::move(reduced))
{
}

void StandardRb::linearize(const Eigen::Ref<const Eigen::VectorXd> &alpha, const Parameter &mu,
                           Eigen::VectorXd &residual, Eigen::MatrixXd &jacobian) const
{
  const Eigen::VectorXd u = reduced_.basis * alpha;
  Eigen::VectorXd r;
  fem::SparseMatrix j;
  model_->linearize(u, mu, r, j, false);
  residual = reduced_.basis.transpose() * r;
  const Eigen::MatrixXd jz = j * reduced_.basis;
  jacobian = reduced_.basis.transpose() * jz;
}

RomSolution StandardRb::solve(const Parameter &mu, const NewtonSettings &settings,
                              const Eigen::VectorXd *initial) const
{
  auto sol = newton(
    size(), settings, initial,
    [&](const Eigen::VectorXd &a, Eigen::VectorXd &r, Eigen::MatrixXd &j) { linearize(a, mu, r, j); },
    "standard RB");
  sol.output = reduced_.output.dot(sol.alpha);
  return sol;
}

EiOperators build_ei_rb(const fem::TruthModel &model, const ReducedBasis &reduced,
                        const std::vector<const interp::InterpolationSystem *> &systems)
{
  const auto &space = model.space();
  const auto &quad = space.quadrature();
  const auto terms = model.terms();
  if (systems.size() != terms.size())
    throw ConfigError("build_ei_rb: need one interpolation system per nonlinear term");
  const auto z = fem::evaluate_columns(space, quad, reduced.basis);

  EiOperators ops;
  ops.kind = model.kind();
  if (model.kind() == fem::ProblemKind::Elliptic)
    ops.stiffness = reduced.stiffness;
  ops.load = reduced.load;
  ops.output = reduced.output;
  for (std::size_t t = 0; t < terms.size(); ++t)
  {
    const auto &system = *systems[t];
    if (system.evaluation_points() != quad.size())
      throw ConfigError("build_ei_rb: interpolation system was built on a different point set");
    const int component = terms[t].gradient_component();
    const Eigen::MatrixXd &test = component < 0 ? z.values : component == 0 ? z.dx : z.dy;
    // C(j, m) = int psi_m * test_j
    const Eigen::MatrixXd coupling =
      test.transpose() * (quad.weights.asDiagonal() * system.basis());

    InterpolatedTerm it{terms[t], {}, {}, {}, system.matrix()};
    it.interaction = system.matrix()
                       .transpose()
                       .triangularView<Eigen::UnitUpper>()
                       .solve(coupling.transpose())
                       .transpose();
    const Eigen::Index m = system.size();
    it.basis_at_points.resize(m, reduced.size());
    if (component >= 0)
      it.gradient_at_points.resize(m, reduced.size());
    for (Eigen::Index k = 0; k < m; ++k)
    {
      const Eigen::Index p = system.points()[k];
      it.basis_at_points.row(k) = z.values.row(p);
      if (component >= 0)
        it.gradient_at_points.row(k) = (component == 0 ? z.dx : z.dy).row(p);
    }
    ops.terms.push_back(std::move(it));
  }
  return ops;
}

void ei_linearize(const EiOperators &ops, const Eigen::Ref<const Eigen::VectorXd> &alpha,
                  const Parameter &mu, Eigen::VectorXd &residual, Eigen::MatrixXd &jacobian,
                  std::vector<Eigen::VectorXd> *coefficients)
{
  const Eigen::Index n = ops.size();
  require(alpha.size() == n, "ei_linearize: coefficient length mismatch");
  const bool elliptic = ops.kind == fem::ProblemKind::Elliptic;
  if (elliptic)
  {
    residual = ops.stiffness * alpha - ops.load;
    jacobian = ops.stiffness;
  }
  else
  {
    residual = -mu[0] * ops.load;
    jacobian = Eigen::MatrixXd::Zero(n, n);
  }
  const double scale = elliptic ? mu[0] : 1.0;
  if (coefficients)
    coefficients->clear();
  for (const auto &t : ops.terms)
  {
    const Eigen::Index m = t.basis_at_points.rows();
    const Eigen::VectorXd u = t.basis_at_points * alpha;
    Eigen::VectorXd grad;
    if (t.gradient_at_points.size())
      grad = t.gradient_at_points * alpha;
    Eigen::VectorXd samples(m);
    Eigen::MatrixXd h(m, n);
    for (Eigen::Index k = 0; k < m; ++k)
    {
      const auto pe = t.term.evaluate(u[k], grad.size() ? grad[k] : 0.0, mu);
      samples[k] = pe.value;
      h.row(k) = pe.d_u * t.basis_at_points.row(k);
      if (grad.size())
        h.row(k) += pe.d_grad * t.gradient_at_points.row(k);
    }
    residual.noalias() += scale * (t.interaction * samples);
    jacobian.noalias() += scale * (t.interaction * h);
    if (coefficients)
      coefficients->push_back(t.interpolation_matrix.triangularView<Eigen::UnitLower>().solve(samples));
  }
}

RomSolution solve_ei_rb(const EiOperators &ops, const Parameter &mu, const NewtonSettings &settings,
                        const Eigen::VectorXd *initial)
{
  auto sol = newton(
    ops.size(), settings, initial,
    [&](const Eigen::VectorXd &a, Eigen::VectorXd &r, Eigen::MatrixXd &j) {
      ei_linearize(ops, a, mu, r, j);
    },
    "EI reduced");
  Eigen::VectorXd r;
  Eigen::MatrixXd j;
  ei_linearize(ops, sol.alpha, mu, r, j, &sol.interpolation);
  sol.output = ops.output.dot(sol.alpha);
  return sol;
}

RomSolution solve_with_homotopy(const ReducedSolve &solve, const Parameter &mu, int &steps)
{
  steps = 0;
  try
  {
    return solve(mu, nullptr);
  }
  catch (const SolverError &)
  {
  }
  for (int n : {4, 16})
  {
    try
    {
      RomSolution last = solve({mu[0] / n, mu[1]}, nullptr);
      for (int k = 2; k <= n; ++k)
        last = solve({mu[0] * k / n, mu[1]}, &last.alpha);
      steps = n;
      return last;
    }
    catch (const SolverError &)
    {
    }
  }
  throw SolverError("reduced Newton failed even with continuation in mu1", {});
}

}  // namespace eirb::rom
