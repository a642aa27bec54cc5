#include <cmath>
#include <filesystem>

#include "catch2/catch_amalgamated.hpp"
#include "eirb/sampling/sampling.hpp"
#include "eirb/sampling/snapshots.hpp"
#include "support.hpp"

using namespace eirb;
using namespace eirb::sampling;
using Catch::Approx;

TEST_CASE("log map")
{
  CHECK(log_map(-1.0, -1.0, -0.01, 3.0) == -1.0);
  CHECK(log_map(-0.01, -1.0, -0.01, 3.0) == Approx(-0.01).epsilon(1e-15));
  const double mid = -1.0 + 0.99 * (1.0 - std::exp(-1.5)) / (1.0 - std::exp(-3.0));
  CHECK(log_map(-0.505, -1.0, -0.01, 3.0) == Approx(mid).epsilon(1e-14));
  CHECK(log_map(-0.505, -1.0, -0.01, 3.0) == Approx(-0.19060).margin(5e-6));
  CHECK_THROWS_AS(log_map(0.5, -1.0, -0.01, 3.0), ContractViolation);

  double previous = -2.0;
  for (int i = 0; i <= 1000; ++i)
  {
    const double y = log_map(-1.0 + 0.99 * i / 1000.0, -1.0, -0.01, 3.0);
    CHECK(y > previous);
    previous = y;
  }
}

TEST_CASE("sample grids")
{
  const auto corners = build_sample_grid(ParameterDomain::elliptic(), 2, Distribution::uniform());
  REQUIRE(corners.size() == 4);
  CHECK(corners.points[0] == Parameter{1.0, 1.0});
  CHECK(corners.points[1] == Parameter{1.0, 10.0});
  CHECK(corners.points[2] == Parameter{10.0, 1.0});
  CHECK(corners.points[3] == Parameter{10.0, 10.0});

  const auto g8 = build_sample_grid(ParameterDomain::gaussian(), 8, Distribution::log(3.0));
  double lo = 0.0, hi = -2.0;
  for (const auto &p : g8.points)
  {
    CHECK(ParameterDomain::gaussian().contains(p));
    lo = std::min({lo, p[0], p[1]});
    hi = std::max({hi, p[0], p[1]});
  }
  CHECK(lo == -1.0);
  CHECK(hi == Approx(-0.01).epsilon(1e-15));

  const auto g3 = build_sample_grid(ParameterDomain::gaussian(), 3, Distribution::log(3.0));
  CHECK(g3.points[4][0] == Approx(-0.19060).margin(5e-6));
  CHECK(g3.provenance == Provenance::LogGrid);

  const auto again = build_sample_grid(ParameterDomain::gaussian(), 8, Distribution::log(3.0));
  CHECK(again.points == g8.points);
}

TEST_CASE("sample sets round-trip through CSV")
{
  const auto s = build_sample_grid(ParameterDomain::diffusion(), 4, Distribution::uniform());
  const auto path = (std::filesystem::temp_directory_path() / "eirb_samples_test.csv").string();
  write_samples_csv(path, s);
  CHECK(read_samples_csv(path).points == s.points);
  std::filesystem::remove(path);
}

TEST_CASE("snapshot basis is orthonormal and spans the snapshots")
{
  for (auto kind : {fem::ProblemKind::Elliptic, fem::ProblemKind::Diffusion})
  {
    const auto space = fem::default_space(kind, kind == fem::ProblemKind::Elliptic ? 4 : 5);
    const fem::TruthModel model(space, kind);
    const auto samples = build_sample_grid(ParameterDomain::of(kind), 3, Distribution::uniform());
    const auto basis = compute_snapshot_basis(samples, model);
    CHECK(basis.size() == 9);
    CHECK(basis.gram_check <= 1e-10);
    const auto &a = model.stiffness();
    for (Eigen::Index n = 0; n < basis.raw.cols(); ++n)
    {
      const Eigen::VectorXd z = basis.raw.col(n);
      const Eigen::VectorXd coeff = basis.orthonormal.transpose() * (a * z);
      const Eigen::VectorXd residual = z - basis.orthonormal * coeff;
      CHECK(std::sqrt(std::max(0.0, residual.dot(a * residual))) <= 1e-10 * std::max(1.0, std::sqrt(z.dot(a * z))));
    }
  }
}

TEST_CASE("single snapshot is normalized and duplicates are dropped")
{
  const auto space = fem::default_space(fem::ProblemKind::Elliptic, 8);
  const fem::TruthModel model(space, fem::ProblemKind::Elliptic);
  SampleSet one{{{5.0, 5.0}}, Provenance::Explicit};
  const auto b1 = compute_snapshot_basis(one, model);
  const Eigen::VectorXd z = b1.raw.col(0);
  const double norm = std::sqrt(z.dot(model.stiffness() * z));
  CHECK((b1.orthonormal.col(0) - z / norm).cwiseAbs().maxCoeff() < 1e-14);

  SampleSet twice{{{5.0, 5.0}, {5.0, 5.0}}, Provenance::Explicit};
  const auto b2 = compute_snapshot_basis(twice, model);
  CHECK(b2.size() == 1);
  CHECK(b2.dropped == std::vector<int>{1});
}
