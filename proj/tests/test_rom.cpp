#include <cmath>
#include <filesystem>
#include <map>
#include <memory>

#include <Eigen/Dense>

#include "catch2/catch_amalgamated.hpp"
#include "eirb/fem/field.hpp"
#include "eirb/interpolation/candidates.hpp"
#include "eirb/rom/metrics.hpp"
#include "eirb/rom/reduced.hpp"
#include "support.hpp"

using namespace eirb;
using Catch::Approx;

namespace
{

/// Coarse truth model, 3x3 training grid and FOEIM-I systems with M = 2N.
struct PdeFixture
{
  fem::ProblemKind kind;
  fem::DiscreteSpace space;
  std::unique_ptr<fem::TruthModel> model;
  sampling::SnapshotBasis basis;
  rom::ReducedBasis reduced;
  std::vector<interp::InterpolationSystem> systems;
  rom::EiOperators ops;

  explicit PdeFixture(fem::ProblemKind k)
    : kind(k), space(fem::default_space(k, k == fem::ProblemKind::Elliptic ? 4 : 5))
  {
    model = std::make_unique<fem::TruthModel>(space, kind);
    const auto samples =
      sampling::build_sample_grid(sampling::ParameterDomain::of(kind), 3, sampling::Distribution::uniform());
    basis = sampling::compute_snapshot_basis(samples, *model);
    reduced = rom::build_standard_rb(*model, basis);
    const auto snapshots = rom::sample_snapshots(space, basis);
    for (const auto &term : model->terms())
    {
      const auto lagrange = interp::snapshot_nonlinear(snapshots, term);
      const auto taylor = interp::build_taylor_space(snapshots, term).space;
      systems.push_back(interp::foeim1_construct(lagrange, taylor, 2 * basis.size()));
    }
    ops = rom::build_ei_rb(*model, reduced, pointers());
  }

  std::vector<const interp::InterpolationSystem *> pointers() const
  {
    std::vector<const interp::InterpolationSystem *> p;
    for (const auto &s : systems)
      p.push_back(&s);
    return p;
  }
};

const PdeFixture &fixture(fem::ProblemKind kind)
{
  static std::map<fem::ProblemKind, std::unique_ptr<PdeFixture>> cache;
  auto &slot = cache[kind];
  if (!slot)
    slot = std::make_unique<PdeFixture>(kind);
  return *slot;
}

const auto kKinds = {fem::ProblemKind::Elliptic, fem::ProblemKind::Diffusion};

using Linearization = std::function<void(const Eigen::VectorXd &, Eigen::VectorXd &, Eigen::MatrixXd &)>;

/// Max relative mismatch between J v and central differences of the residual.
double jacobian_mismatch(const Linearization &linearize, const Eigen::VectorXd &alpha, std::mt19937_64 &rng)
{
  Eigen::VectorXd r, rp, rm;
  Eigen::MatrixXd j, unused;
  linearize(alpha, r, j);
  double worst = 0.0;
  for (int trial = 0; trial < 5; ++trial)
  {
    const Eigen::VectorXd v = testing::random_vector(alpha.size(), rng);
    const double h = 1e-6;
    linearize(alpha + h * v, rp, unused);
    linearize(alpha - h * v, rm, unused);
    const Eigen::VectorXd fd = (rp - rm) / (2.0 * h);
    const Eigen::VectorXd jv = j * v;
    worst = std::max(worst, (fd - jv).norm() / std::max(1.0, jv.norm()));
  }
  return worst;
}

}  // namespace

TEST_CASE("reduced operators")
{
  for (auto kind : kKinds)
  {
    const auto &f = fixture(kind);
    const Eigen::Index n = f.reduced.size();
    const Eigen::MatrixXd k = Eigen::MatrixXd(f.model->stiffness());
    const Eigen::MatrixXd dense = f.reduced.basis.transpose() * k * f.reduced.basis;
    CHECK((f.reduced.stiffness - dense).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((f.reduced.stiffness - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((f.reduced.output - f.reduced.basis.transpose() * f.model->output_functional()).cwiseAbs().maxCoeff() <=
          1e-12);
    CHECK((f.reduced.load - f.reduced.basis.transpose() * f.model->load()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("interaction matrices match a dense oracle")
{
  for (auto kind : kKinds)
  {
    const auto &f = fixture(kind);
    const auto &quad = f.space.quadrature();
    const auto z = fem::evaluate_columns(f.space, quad, f.reduced.basis);
    const auto terms = f.model->terms();
    REQUIRE(f.ops.terms.size() == terms.size());
    for (std::size_t t = 0; t < terms.size(); ++t)
    {
      const int c = terms[t].gradient_component();
      // g tests against d/dx1, h against d/dx2.
      if (kind == fem::ProblemKind::Diffusion)
        CHECK(c == static_cast<int>(t));
      const Eigen::MatrixXd &test = c < 0 ? z.values : c == 0 ? z.dx : z.dy;
      const auto &s = f.systems[t];
      const Eigen::MatrixXd coupling = test.transpose() * quad.weights.asDiagonal() * s.basis();
      const Eigen::MatrixXd oracle = coupling * s.matrix().inverse();
      const double scale = std::max(1.0, oracle.cwiseAbs().maxCoeff());
      CHECK((f.ops.terms[t].interaction - oracle).cwiseAbs().maxCoeff() <= 1e-10 * scale);
      if (kind == fem::ProblemKind::Diffusion)
      {
        const Eigen::MatrixXd &other = c == 0 ? z.dy : z.dx;
        const Eigen::MatrixXd swapped = other.transpose() * quad.weights.asDiagonal() * s.basis() * s.matrix().inverse();
        CHECK((f.ops.terms[t].interaction - swapped).cwiseAbs().maxCoeff() > 1e-6 * scale);
      }
    }
  }
}

TEST_CASE("online operators hold only reduced-size data")
{
  for (auto kind : kKinds)
  {
    const auto &f = fixture(kind);
    const Eigen::Index n = f.ops.size();
    CHECK(f.ops.output.size() == n);
    CHECK(f.ops.load.size() == n);
    if (kind == fem::ProblemKind::Elliptic)
      CHECK((f.ops.stiffness.rows() == n && f.ops.stiffness.cols() == n));
    for (std::size_t t = 0; t < f.ops.terms.size(); ++t)
    {
      const auto &term = f.ops.terms[t];
      const Eigen::Index m = f.systems[t].size();
      CHECK((term.interaction.rows() == n && term.interaction.cols() == m));
      CHECK((term.basis_at_points.rows() == m && term.basis_at_points.cols() == n));
      CHECK((term.interpolation_matrix.rows() == m && term.interpolation_matrix.cols() == m));
      CHECK((term.gradient_at_points.size() == 0 || term.gradient_at_points.rows() == m));
    }
  }
}

TEST_CASE("scalar interpolated model")
{
  const auto space = fem::default_space(fem::ProblemKind::Elliptic, 8);
  const fem::TruthModel model(space, fem::ProblemKind::Elliptic);
  const sampling::SampleSet one{{{4.0, 6.0}}, sampling::Provenance::Explicit};
  const auto basis = sampling::compute_snapshot_basis(one, model);
  const auto reduced = rom::build_standard_rb(model, basis);
  const auto snapshots = rom::sample_snapshots(space, basis);
  const auto term = fem::NonlinearTerm::elliptic();
  const auto system = interp::eim_greedy(interp::snapshot_nonlinear(snapshots, term), 1);
  const auto ops = rom::build_ei_rb(model, reduced, {&system});
  REQUIRE(ops.size() == 1);
  REQUIRE(system.size() == 1);

  const auto &quad = space.quadrature();
  const auto z = fem::evaluate_columns(space, quad, reduced.basis);
  const double c = (z.values.col(0).array() * quad.weights.array() * system.basis().col(0).array()).sum();
  CHECK(ops.terms[0].interaction(0, 0) == Approx(c).epsilon(1e-13));

  const Parameter mu{4.0, 6.0};
  const double alpha = 0.3;
  const double zeta = z.values(system.points()[0], 0);
  const double expected = reduced.stiffness(0, 0) * alpha - reduced.load[0] +
                          mu[0] * c * std::exp(std::sin(mu[1] * zeta * alpha));
  Eigen::VectorXd r;
  Eigen::MatrixXd j;
  rom::ei_linearize(ops, Eigen::VectorXd::Constant(1, alpha), mu, r, j);
  CHECK(r[0] == Approx(expected).epsilon(1e-12));
}

TEST_CASE("Galerkin reproduction at training parameters")
{
  for (auto kind : kKinds)
  {
    const auto &f = fixture(kind);
    REQUIRE(f.basis.dropped.empty());
    const rom::StandardRb rb(*f.model, f.reduced);
    for (std::size_t i = 0; i < f.basis.samples.size(); ++i)
    {
      const auto sol = rb.solve(f.basis.samples.points[i]);
      const Eigen::VectorXd diff = f.reduced.basis * sol.alpha - f.basis.raw.col(static_cast<Eigen::Index>(i));
      CHECK(rom::norm_x(*f.model, diff) <= 1e-8);
      const double s = f.basis.outputs[static_cast<Eigen::Index>(i)];
      CHECK(std::abs(sol.output - s) <= 1e-8 * std::abs(s));
    }
  }
}

TEST_CASE("reduced Jacobians match finite differences")
{
  std::mt19937_64 rng(41);
  for (auto kind : kKinds)
  {
    const auto &f = fixture(kind);
    const rom::StandardRb rb(*f.model, f.reduced);
    const auto domain = sampling::ParameterDomain::of(kind);
    for (int trial = 0; trial < 4; ++trial)
    {
      std::uniform_real_distribution<double> u0(domain.lower[0], domain.upper[0]), u1(domain.lower[1], domain.upper[1]);
      const Parameter mu{u0(rng), u1(rng)};
      const Eigen::VectorXd alpha = rb.solve(mu).alpha + testing::random_vector(f.reduced.size(), rng, 0.1);
      const Linearization standard = [&](const Eigen::VectorXd &a, Eigen::VectorXd &r, Eigen::MatrixXd &j) {
        rb.linearize(a, mu, r, j);
      };
      const Linearization ei = [&](const Eigen::VectorXd &a, Eigen::VectorXd &r, Eigen::MatrixXd &j) {
        rom::ei_linearize(f.ops, a, mu, r, j);
      };
      CHECK(jacobian_mismatch(standard, alpha, rng) <= 1e-5);
      CHECK(jacobian_mismatch(ei, alpha, rng) <= 1e-5);
    }
  }
}

TEST_CASE("reduced solves at special parameters")
{
  const auto &d = fixture(fem::ProblemKind::Diffusion);
  const rom::StandardRb drb(*d.model, d.reduced);
  CHECK(drb.solve({0.0, 5.0}).alpha.isZero(0.0));
  CHECK(rom::solve_ei_rb(d.ops, {0.0, 5.0}).alpha.isZero(0.0));

  const auto &e = fixture(fem::ProblemKind::Elliptic);
  const rom::StandardRb erb(*e.model, e.reduced);
  const Eigen::VectorXd linear = e.reduced.stiffness.ldlt().solve(e.reduced.load);
  CHECK((erb.solve({0.0, 5.0}).alpha - linear).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((rom::solve_ei_rb(e.ops, {0.0, 5.0}).alpha - linear).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("outputs are linear in the reduced coefficients")
{
  for (auto kind : kKinds)
  {
    const auto &f = fixture(kind);
    const rom::StandardRb rb(*f.model, f.reduced);
    const Parameter mu = kind == fem::ProblemKind::Elliptic ? Parameter{6.0, 3.0} : Parameter{5.0, 7.0};
    const auto a = rb.solve(mu);
    CHECK(a.output == Approx(f.reduced.output.dot(a.alpha)).epsilon(1e-14));
    CHECK(a.report.converged);
    int steps = 0;
    const auto b = rom::solve_with_homotopy(
      [&](const Parameter &p, const Eigen::VectorXd *init) { return rom::solve_ei_rb(f.ops, p, {}, init); }, mu, steps);
    CHECK(b.output == Approx(f.ops.output.dot(b.alpha)).epsilon(1e-14));
    CHECK(b.interpolation.size() == f.ops.terms.size());
    CHECK(b.report.iterations <= 50);
  }
}

TEST_CASE("homotopy fallback")
{
  int calls = 0;
  const rom::ReducedSolve easy = [&](const Parameter &mu, const Eigen::VectorXd *) {
    ++calls;
    rom::RomSolution s;
    s.alpha = Eigen::VectorXd::Constant(1, mu[0]);
    return s;
  };
  int steps = -1;
  CHECK(rom::solve_with_homotopy(easy, {3.0, 1.0}, steps).alpha[0] == 3.0);
  CHECK(steps == 0);
  CHECK(calls == 1);

  // Fails from zero beyond mu1 = 1; succeeds when warm-started.
  const rom::ReducedSolve picky = [](const Parameter &mu, const Eigen::VectorXd *initial) {
    if (!initial && mu[0] > 1.0)
      throw SolverError("diverged", {});
    rom::RomSolution s;
    s.alpha = Eigen::VectorXd::Constant(1, mu[0]);
    return s;
  };
  CHECK(rom::solve_with_homotopy(picky, {8.0, 1.0}, steps).alpha[0] == 8.0);
  CHECK(steps == 16);

  const rom::ReducedSolve broken = [](const Parameter &, const Eigen::VectorXd *) -> rom::RomSolution {
    throw SolverError("diverged", {});
  };
  CHECK_THROWS_AS(rom::solve_with_homotopy(broken, {2.0, 1.0}, steps), SolverError);
}

TEST_CASE("error aggregation")
{
  auto sample = [](double s, double ds_rb, double ds_ei, double u, double du_rb, double du_ei) {
    rom::ErrorSample e;
    e.s_truth = s;
    e.eps_s_rb = ds_rb;
    e.eps_s_ei = ds_ei;
    e.u_norm = u;
    e.eps_u_rb = du_rb;
    e.eps_u_ei = du_ei;
    return e;
  };
  std::vector<rom::ErrorSample> samples{sample(2.0, 0.1, 0.2, 4.0, 0.5, 0.5), sample(-1.0, 0.2, 0.8, 1.0, 0.1, 0.3),
                                        sample(1.0, 0.0, 0.1, 5.0, 0.2, 0.2)};
  auto failed = sample(100.0, 1.0, 1.0, 100.0, 1.0, 1.0);
  failed.status = "failed";
  samples.push_back(failed);

  const auto r = rom::summarize_errors(samples);
  CHECK(r.failed == 1);
  CHECK(r.excluded_s == 1);
  CHECK(r.excluded_u == 0);
  CHECK(r.eps_s_rb == Approx(0.3 / 4.0));
  CHECK(r.eps_s_ei == Approx(1.1 / 4.0));
  CHECK(r.eps_u_rb == Approx(0.8 / 10.0));
  CHECK(r.eps_u_ei == Approx(1.0 / 10.0));
  CHECK(r.eta_s == Approx((2.0 + 4.0) / 2.0));
  CHECK(r.eta_u == Approx((1.0 + 3.0 + 1.0) / 3.0));
  CHECK(std::isnan(rom::ErrorReport::eta(1.0, 0.0)));
  CHECK(std::isnan(rom::summarize_errors({failed}).eta_s));
}

TEST_CASE("error samples from truth and reduced solutions")
{
  const auto &f = fixture(fem::ProblemKind::Elliptic);
  const rom::StandardRb rb(*f.model, f.reduced);
  const Parameter mu{7.0, 2.5};
  const auto fom = f.model->solve(mu);
  const rom::TruthSample truth{fom.field.coefficients, fom.output, rom::norm_x(*f.model, fom.field.coefficients)};
  const auto a = rb.solve(mu);
  const auto b = rom::solve_ei_rb(f.ops, mu);
  const auto e = rom::error_sample(*f.model, f.reduced.basis, mu, truth, a, b);
  CHECK(e.eps_s_rb == Approx(std::abs(fom.output - a.output)).epsilon(1e-12));
  CHECK(e.eps_s_ei == Approx(std::abs(fom.output - b.output)).epsilon(1e-12));
  const Eigen::VectorXd diff = fom.field.coefficients - f.reduced.basis * b.alpha;
  CHECK(e.eps_u_ei == Approx(rom::norm_x(*f.model, diff)).epsilon(1e-12));
}

TEST_CASE("truth cache")
{
  const auto dir = std::filesystem::temp_directory_path() / "eirb_cache_test";
  std::filesystem::remove_all(dir);
  const auto &f = fixture(fem::ProblemKind::Elliptic);
  rom::TruthCache cache(dir.string());
  const Parameter mu{2.0, 3.0};
  CHECK(cache.key(*f.model, mu) == cache.key(*f.model, Parameter{2.0, 3.0}));
  CHECK(cache.key(*f.model, mu) != cache.key(*f.model, Parameter{2.0, std::nextafter(3.0, 4.0)}));
  CHECK_FALSE(cache.load(*f.model, mu).has_value());

  const sampling::SampleSet set{{mu, {9.0, 9.0}}, sampling::Provenance::Explicit};
  const auto first = cache.solve_all(*f.model, set);
  CHECK(cache.misses() == 2);
  rom::TruthCache warm(dir.string());
  const auto second = warm.solve_all(*f.model, set);
  CHECK(warm.hits() == 2);
  CHECK(warm.misses() == 0);
  for (std::size_t i = 0; i < set.size(); ++i)
  {
    CHECK(second[i].field == first[i].field);
    CHECK(second[i].output == first[i].output);
    CHECK(second[i].norm == first[i].norm);
  }
  std::filesystem::remove_all(dir);

  rom::TruthCache off("");
  off.solve_all(*f.model, set);
  CHECK(off.hits() == 0);
}

TEST_CASE("timing normalization")
{
  volatile double sink = 0.0;
  const std::vector<std::function<void(const Parameter &)>> solvers{
    [&](const Parameter &mu) {
      for (int i = 0; i < 20000; ++i)
        sink = sink + std::sin(mu[0] + i);
    },
    [&](const Parameter &mu) { sink = sink + mu[1]; }};
  const std::vector<Parameter> params(9, Parameter{1.0, 2.0});
  const auto t = rom::timing_harness({"fom", "fast"}, solvers, params);
  CHECK(t.normalized[0] == 1.0);
  CHECK(t.normalized[1] < 1.0);
  CHECK(t.normalized[1] == Approx(t.median_seconds[1] / t.median_seconds[0]));
  CHECK_THROWS_AS(rom::timing_harness({"a"}, solvers, params), ContractViolation);
}
