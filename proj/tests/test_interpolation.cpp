#include <cmath>
#include <filesystem>
#include <numeric>

#include <Eigen/Dense>

#include "catch2/catch_amalgamated.hpp"
#include "eirb/fem/field.hpp"
#include "eirb/interpolation/candidates.hpp"
#include "eirb/interpolation/gaussian_study.hpp"
#include "eirb/interpolation/regression.hpp"
#include "eirb/interpolation/system.hpp"
#include "eirb/rom/reduced.hpp"
#include "support.hpp"

using namespace eirb;
using namespace eirb::interp;
using Catch::Approx;

namespace
{

struct GaussianFixture
{
  GaussianStudy study{8, 3};
  sampling::SampleSet samples =
    sampling::build_sample_grid(sampling::ParameterDomain::gaussian(), 3, sampling::Distribution::log(3.0));
  SnapshotSamples snapshots = study.snapshots(samples);
  CandidateSpace lagrange = snapshot_nonlinear(snapshots, study.term());
  CandidateSpace taylor = build_taylor_space(snapshots, study.term()).space;
};

const GaussianFixture &gaussian()
{
  static const GaussianFixture f;
  return f;
}

double sup(const Eigen::Ref<const Eigen::MatrixXd> &m) { return m.cwiseAbs().maxCoeff(); }

void check_invariants(const InterpolationSystem &s)
{
  const auto &b = s.matrix();
  for (Eigen::Index i = 0; i < s.size(); ++i)
  {
    CHECK(b(i, i) == 1.0);
    CHECK(s.basis()(s.points()[i], i) == 1.0);
    for (Eigen::Index j = i + 1; j < s.size(); ++j)
      CHECK(b(i, j) == 0.0);
    for (Eigen::Index j = 0; j < i; ++j)
      CHECK(std::abs(b(i, j)) <= 1.0 + 1e-12);
  }
  auto pts = s.points();
  std::sort(pts.begin(), pts.end());
  CHECK(std::adjacent_find(pts.begin(), pts.end()) == pts.end());
}

/// Sup-norm interpolation error of each column.
Eigen::VectorXd reproduction_errors(const InterpolationSystem &s, const Eigen::MatrixXd &functions)
{
  const Eigen::MatrixXd approx = s.basis() * s.coefficient_block(s.sample(functions));
  return (approx - functions).cwiseAbs().colwise().maxCoeff().transpose();
}

}  // namespace

TEST_CASE("snapshot nonlinear terms")
{
  SnapshotSamples zero;
  zero.values = Eigen::MatrixXd::Zero(10, 2);
  zero.dx = zero.dy = Eigen::MatrixXd::Zero(10, 2);
  zero.mu = {{-0.5, -0.5}, {-0.2, -0.3}};
  CHECK((snapshot_nonlinear(zero, fem::NonlinearTerm::gaussian()).values.array() == 1.0).all());
  zero.mu = {{2.0, 3.0}, {5.0, 1.0}};
  CHECK(snapshot_nonlinear(zero, fem::NonlinearTerm::diffusion_g()).values.isZero(0.0));

  std::mt19937_64 rng(17);
  SnapshotSamples s;
  s.values = testing::random_matrix(20, 2, rng);
  s.mu = {{2.0, 3.0}, {5.0, 7.0}};
  const auto xi = snapshot_nonlinear(s, fem::NonlinearTerm::elliptic());
  CHECK(xi.values(7, 1) == Approx(std::exp(std::sin(7.0 * s.values(7, 1)))).epsilon(1e-15));
  CHECK(xi.labels[1] == "xi[1]");
}

TEST_CASE("Taylor candidates")
{
  std::mt19937_64 rng(19);
  SnapshotSamples s;
  const Eigen::Index n = 3, points = 25;
  s.values = testing::random_matrix(points, n, rng);
  s.dx = testing::random_matrix(points, n, rng);
  s.dy = testing::random_matrix(points, n, rng);
  s.mu = {{2.0, 3.0}, {5.0, 7.0}, {9.0, 1.5}};

  for (const auto &term : {fem::NonlinearTerm::elliptic(), fem::NonlinearTerm::diffusion_g(),
                           fem::NonlinearTerm::diffusion_h()})
  {
    const auto all = taylor_candidates(s, term);
    REQUIRE(all.cols() == 2 * n * n);
    for (Eigen::Index k = 0; k < n; ++k)
    {
      CHECK(all.col(k * n + k).isZero(0.0));
      CHECK(all.col(n * n + k * n + k).isZero(0.0));
    }
    // Flat index j = n_idx N + k with n_idx = 0, k = 1, checked pointwise.
    const Eigen::MatrixXd &grad = term.gradient_component() == 1 ? s.dy : s.dx;
    for (Eigen::Index x = 0; x < points; ++x)
    {
      const auto e = term.evaluate(s.values(x, 0), grad(x, 0), s.mu[0]);
      double expected = e.d_u * (s.values(x, 1) - s.values(x, 0));
      if (term.needs_gradient())
        expected += e.d_grad * (grad(x, 1) - grad(x, 0));
      CHECK(std::abs(all(x, 1) - expected) <= 1e-13 * std::max(1.0, std::abs(expected)));
      const double mu_part = e.d_mu[0] * (s.mu[2][0] - s.mu[0][0]) + e.d_mu[1] * (s.mu[2][1] - s.mu[0][1]);
      CHECK(std::abs(all(x, n * n + 2) - mu_part) <= 1e-13 * std::max(1.0, std::abs(mu_part)));
    }
    const auto streamed = build_taylor_space(s, term);
    const auto direct = independent_subset(all);
    CHECK(streamed.kept == direct.kept);
    CHECK((streamed.space.values - direct.space.values).cwiseAbs().maxCoeff() == 0.0);
  }

  const auto &g = gaussian();
  const auto all = taylor_candidates(g.snapshots, g.study.term());
  const Eigen::Index nn = g.snapshots.size() * g.snapshots.size();
  CHECK(all.rightCols(nn).isZero(0.0));
  CHECK(g.taylor.size() <= nn - g.snapshots.size());
}

TEST_CASE("independent subset")
{
  std::mt19937_64 rng(23);
  const Eigen::MatrixXd base = testing::random_matrix(300, 12, rng);
  const Eigen::MatrixXd low_rank = base * testing::random_matrix(12, 20, rng);
  for (const Eigen::MatrixXd &m : {low_rank, testing::random_matrix(300, 20, rng)})
  {
    const auto subset = independent_subset(m);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
    qr.setThreshold(1e-10);
    CHECK(subset.space.size() == qr.rank());
    CHECK(subset.space.size() <= m.cols());
    CHECK(subset.space.kind == SpaceKind::Taylor);
  }

  Eigen::MatrixXd twice(50, 3);
  twice.col(0) = testing::random_vector(50, rng);
  twice.col(1) = testing::random_vector(50, rng);
  twice.col(2) = twice.col(0);
  const auto d = independent_subset(twice);
  CHECK(d.kept == std::vector<Eigen::Index>{0, 1});
  CHECK(d.dependent_dropped == 1);

  Eigen::MatrixXd tiny = testing::random_matrix(50, 2, rng);
  tiny.col(1) *= 1e-14;
  CHECK(independent_subset(tiny).zero_dropped == 1);
}

TEST_CASE("EIM greedy structure")
{
  const auto &g = gaussian();
  const auto s1 = eim_greedy(g.lagrange, 1);
  Eigen::Index j1 = 0;
  g.lagrange.values.cwiseAbs().colwise().maxCoeff().maxCoeff(&j1);
  Eigen::Index x1 = 0;
  g.lagrange.values.col(j1).cwiseAbs().maxCoeff(&x1);
  CHECK(s1.points()[0] == x1);
  CHECK(s1.basis()(x1, 0) == 1.0);
  CHECK(lebesgue_constant(s1) == Approx(1.0).epsilon(1e-15));

  const auto s = eim_greedy(g.lagrange, g.lagrange.size());
  check_invariants(s);
  CHECK(s.status() == BuildStatus::Complete);
  CHECK(reproduction_errors(s, g.lagrange.values).maxCoeff() <= 1e-12);
  CHECK(lebesgue_constant(s) <= std::pow(2.0, static_cast<double>(s.size())) - 1.0);

  // Selected snapshots are reproduced at every M.
  for (Eigen::Index m = 1; m <= s.size(); ++m)
  {
    const auto t = s.truncated(m);
    for (Eigen::Index k = 0; k < m; ++k)
    {
      const Eigen::MatrixXd f = g.lagrange.values.col(t.log()[k].candidate);
      CHECK(reproduction_errors(t, f)[0] <= 1e-12);
    }
  }
}

TEST_CASE("EIM is invariant under candidate permutations")
{
  // Random candidates avoid the exact sup-norm ties of symmetric problems.
  std::mt19937_64 rng(29);
  CandidateSpace space;
  space.values = testing::random_matrix(400, 30, rng);
  space.labels.assign(30, "r");
  const auto reference = eim_greedy(space, 20);
  std::vector<Eigen::Index> order(space.size());
  std::iota(order.begin(), order.end(), 0);
  for (int trial = 0; trial < 3; ++trial)
  {
    std::shuffle(order.begin(), order.end(), rng);
    CandidateSpace permuted = space;
    for (Eigen::Index j = 0; j < space.size(); ++j)
      permuted.values.col(j) = space.values.col(order[j]);
    const auto s = eim_greedy(permuted, 20);
    CHECK(s.points() == reference.points());
    CHECK((s.basis() - reference.basis()).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("FOEIM constructions")
{
  const auto &g = gaussian();
  const Eigen::Index n = g.lagrange.size();
  const auto eim = eim_greedy(g.lagrange, n);
  const auto first = foeim1_construct(g.lagrange, g.taylor, 2 * n);
  check_invariants(first);
  CHECK(first.size() == 2 * n);
  CHECK(std::equal(eim.points().begin(), eim.points().end(), first.points().begin()));
  CHECK(first.basis().leftCols(n) == eim.basis());
  const auto small = foeim1_construct(g.lagrange, g.taylor, n - 2);
  CHECK(small.points() == eim_greedy(g.lagrange, n - 2).points());

  const auto second = foeim2_construct(g.lagrange, g.taylor, 2 * n);
  check_invariants(second);
  const auto swapped = eim_greedy(CandidateSpace::combine(g.taylor, g.lagrange), 2 * n);
  CHECK(second.points() == swapped.points());

  const Eigen::Index l = n + g.taylor.size();
  const auto full = foeim2_construct(g.lagrange, g.taylor, l);
  check_invariants(full);
  CHECK(full.size() <= l);
  CHECK(full.size() >= l - 2);
  const auto combined = CandidateSpace::combine(g.lagrange, g.taylor);
  const Eigen::VectorXd sups = combined.values.cwiseAbs().colwise().maxCoeff().transpose();
  CHECK((reproduction_errors(full, combined.values).array() <= 1e-10 * sups.array().max(1.0)).all());
  CHECK(lebesgue_constant(full) <= std::pow(2.0, static_cast<double>(l)) - 1.0);

  const auto exhausted = foeim2_construct(g.lagrange, g.taylor, l + 5);
  CHECK(exhausted.size() == full.size());
  CHECK(exhausted.status() == BuildStatus::Exhausted);
}

TEST_CASE("interpolation coefficients and values")
{
  const auto &g = gaussian();
  const auto s = foeim1_construct(g.lagrange, g.taylor, 15);
  const Eigen::Index m = s.size();
  for (Eigen::Index j = 0; j < m; ++j)
  {
    const Eigen::VectorXd beta = s.coefficients(s.sample(s.basis().col(j)));
    CHECK((beta - Eigen::VectorXd::Unit(m, j)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(s.values(Eigen::VectorXd::Unit(m, j)) == s.basis().col(j));
  }
  CHECK(s.values(Eigen::VectorXd::Zero(m)).isZero(0.0));
  const auto one = s.truncated(1);
  CHECK(one.coefficients(Eigen::VectorXd::Constant(1, 0.7))[0] == 0.7);

  std::mt19937_64 rng(31);
  const Eigen::VectorXd b = testing::random_vector(m, rng);
  const Eigen::VectorXd dense = s.matrix().fullPivLu().solve(b);
  const Eigen::VectorXd beta = s.coefficients(b);
  CHECK((beta - dense).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, dense.cwiseAbs().maxCoeff()));
  CHECK((s.values(beta, s.points()) - b).cwiseAbs().maxCoeff() <= 1e-12);

  // Any combination of the basis is reproduced.
  for (int trial = 0; trial < 5; ++trial)
  {
    const Eigen::VectorXd v = s.basis() * testing::random_vector(m, rng);
    CHECK(sup(s.values(s.coefficients(s.sample(v))) - v) <= 1e-12 * std::max(1.0, sup(v)));
  }
}

TEST_CASE("Lebesgue constant of a two-point toy system")
{
  CandidateSpace toy;
  toy.values.resize(3, 2);
  toy.values << 1.0, 0.3, 0.5, 1.2, 0.2, -0.8;
  toy.labels = {"a", "b"};
  const auto s = eim_greedy(toy, 2);
  REQUIRE(s.size() == 2);
  const auto &b = s.matrix();
  const double det = b(0, 0) * b(1, 1) - b(0, 1) * b(1, 0);
  Eigen::Matrix2d inverse;
  inverse << b(1, 1) / det, -b(0, 1) / det, -b(1, 0) / det, b(0, 0) / det;
  double expected = 0.0;
  for (Eigen::Index x = 0; x < 3; ++x)
  {
    const Eigen::RowVector2d cardinal = s.basis().row(x) * inverse;
    expected = std::max(expected, cardinal.cwiseAbs().sum());
  }
  CHECK(lebesgue_constant(s) == Approx(expected).epsilon(1e-14));
  CHECK(lebesgue_constant(s) <= 3.0);
}

TEST_CASE("regression systems")
{
  const auto &g = gaussian();
  const Eigen::Index n = g.lagrange.size();
  const auto s = foeim2_construct(g.lagrange, g.taylor, 3 * n);
  std::mt19937_64 rng(37);

  const RegressionSystem square(s.truncated(n), n);
  const Eigen::VectorXd b = testing::random_vector(n, rng);
  CHECK((square.coefficients(b) - s.truncated(n).coefficients(b)).cwiseAbs().maxCoeff() <= 1e-12);

  const RegressionSystem over(s, n);
  CHECK(over.size() == n);
  CHECK(over.num_points() == 3 * n);
  const Eigen::MatrixXd at_points = s.sample(s.basis().leftCols(n));
  const Eigen::VectorXd in_span = at_points * testing::random_vector(n, rng);
  CHECK((at_points * over.coefficients(in_span) - in_span).cwiseAbs().maxCoeff() <= 1e-12);

  const Eigen::VectorXd noisy = testing::random_vector(3 * n, rng);
  const Eigen::VectorXd oracle = at_points.colPivHouseholderQr().solve(noisy);
  CHECK((over.coefficients(noisy) - oracle).cwiseAbs().maxCoeff() <= 1e-10);

  const Eigen::MatrixXd cardinal = over.basis() * over.solution_operator();
  CHECK(lebesgue_constant(over) == Approx(cardinal.cwiseAbs().rowwise().sum().maxCoeff()).epsilon(1e-14));
}

TEST_CASE("interpolation error metrics")
{
  const auto &g = gaussian();
  const auto s = eim_greedy(g.lagrange, g.lagrange.size());
  const TargetProvider training = [&](std::size_t first, std::size_t count) {
    return g.study.targets(g.samples, first, count);
  };
  CHECK(max_interp_error(s, g.samples.size(), training, 4).max <= 1e-10);

  const auto test =
    sampling::build_sample_grid(sampling::ParameterDomain::gaussian(), 6, sampling::Distribution::uniform());
  const Eigen::MatrixXd targets = g.study.targets(test, 0, test.size());
  const auto system = foeim1_construct(g.lagrange, g.taylor, 14);
  const auto errors = approximation_errors(system, targets);
  const TargetProvider provider = [&](std::size_t first, std::size_t count) {
    return g.study.targets(test, first, count);
  };
  const auto blocked = max_interp_error(system, test.size(), provider, 5);
  CHECK(blocked.per_sample == errors);
  CHECK(blocked.max == *std::max_element(errors.begin(), errors.end()));

  // Error bound with the least-squares projection as best-approximation surrogate.
  const double lambda = lebesgue_constant(system);
  const auto qr = system.basis().colPivHouseholderQr();
  for (std::size_t i = 0; i < test.size(); ++i)
  {
    const Eigen::VectorXd t = targets.col(static_cast<Eigen::Index>(i));
    const double best = sup(t - system.basis() * qr.solve(t));
    CHECK(errors[i] <= (1.0 + lambda) * best * (1.0 + 1e-12) + 1e-14);
  }
}

TEST_CASE("systems round-trip through the binary bundle")
{
  const auto &g = gaussian();
  const auto s = foeim1_construct(g.lagrange, g.taylor, 12);
  const auto path = (std::filesystem::temp_directory_path() / "eirb_system_test.bin").string();
  s.save(path, g.study.points());
  const auto loaded = InterpolationSystem::load(path);
  CHECK(loaded.points() == s.points());
  CHECK(loaded.basis() == s.basis());
  CHECK(loaded.matrix() == s.matrix());
  std::filesystem::remove(path);
}

TEST_CASE("PDE snapshot terms at one quadrature point")
{
  const auto space = fem::default_space(fem::ProblemKind::Diffusion, 5);
  const fem::TruthModel model(space, fem::ProblemKind::Diffusion);
  const auto samples =
    sampling::build_sample_grid(sampling::ParameterDomain::diffusion(), 2, sampling::Distribution::uniform());
  const auto basis = sampling::compute_snapshot_basis(samples, model);
  const auto snap = rom::sample_snapshots(space, basis);
  const auto h = snapshot_nonlinear(snap, fem::NonlinearTerm::diffusion_h());
  const auto sample = fem::evaluate_field(space, fem::make_field(space, basis.raw.col(2)), space.quadrature());
  const Eigen::Index q = 123;
  const double expected = fem::NonlinearTerm::diffusion_h().evaluate(sample.values[q], sample.dy[q], samples.points[2]).value;
  CHECK(h.values(q, 2) == Approx(expected).epsilon(1e-13));
}
