#include "eirb/interpolation/system.hpp"

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <fstream>

#include <Eigen/Dense>

#include "eirb/parallel.hpp"

namespace eirb::interp
{

namespace
{

/// Index of the largest |v| entry; the first one on ties.
Eigen::Index argmax_abs(const Eigen::Ref<const Eigen::VectorXd> &v)
{
  Eigen::Index best = 0;
  double value = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
  {
    const double a = std::abs(v[i]);
    if (a > value)
    {
      value = a;
      best = i;
    }
  }
  return best;
}

constexpr char kMagic[8] = {'E', 'I', 'R', 'B', 'S', 'Y', 'S', '1'};

template <typename T>
void put(std::ofstream &out, const T &v)
{
  out.write(reinterpret_cast<const char *>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream &in)
{
  T v{};
  in.read(reinterpret_cast<char *>(&v), sizeof(T));
  return v;
}

void put_matrix(std::ofstream &out, const Eigen::MatrixXd &m)
{
  put<std::int64_t>(out, m.rows());
  put<std::int64_t>(out, m.cols());
  out.write(reinterpret_cast<const char *>(m.data()),
            static_cast<std::streamsize>(sizeof(double) * m.size()));
}

Eigen::MatrixXd get_matrix(std::ifstream &in)
{
  const auto rows = get<std::int64_t>(in);
  const auto cols = get<std::int64_t>(in);
  if (!in || rows < 0 || cols < 0)
    throw ConfigError("corrupt interpolation bundle");
  Eigen::MatrixXd m(rows, cols);
  in.read(reinterpret_cast<char *>(m.data()), static_cast<std::streamsize>(sizeof(double) * m.size()));
  return m;
}

}  // namespace

InterpolationSystem::InterpolationSystem(Eigen::Index evaluation_points)
  : basis_(evaluation_points, 0), b_(0, 0)
{
}

InterpolationSystem InterpolationSystem::truncated(Eigen::Index m) const
{
  require(m >= 0 && m <= size(), "truncated: size out of range");
  InterpolationSystem out;
  out.points_.assign(points_.begin(), points_.begin() + m);
  out.basis_ = basis_.leftCols(m);
  out.b_ = b_.topLeftCorner(m, m);
  out.log_.assign(log_.begin(), log_.begin() + std::min<Eigen::Index>(m, log_.size()));
  out.status_ = m == size() ? status_ : BuildStatus::Complete;
  return out;
}

Eigen::VectorXd InterpolationSystem::coefficients(const Eigen::Ref<const Eigen::VectorXd> &samples) const
{
  require(samples.size() == size(), "coefficients: sample length must equal system size");
  return b_.triangularView<Eigen::UnitLower>().solve(samples);
}

Eigen::MatrixXd InterpolationSystem::coefficient_block(const Eigen::Ref<const Eigen::MatrixXd> &samples) const
{
  require(samples.rows() == size(), "coefficients: sample length must equal system size");
  return b_.triangularView<Eigen::UnitLower>().solve(samples);
}

Eigen::VectorXd InterpolationSystem::values(const Eigen::Ref<const Eigen::VectorXd> &beta) const
{
  require(beta.size() == size(), "values: coefficient length must equal system size");
  return basis_ * beta;
}

Eigen::VectorXd InterpolationSystem::values(const Eigen::Ref<const Eigen::VectorXd> &beta,
                                            const std::vector<Eigen::Index> &at) const
{
  require(beta.size() == size(), "values: coefficient length must equal system size");
  Eigen::VectorXd out(static_cast<Eigen::Index>(at.size()));
  for (std::size_t i = 0; i < at.size(); ++i)
    out[static_cast<Eigen::Index>(i)] = basis_.row(at[i]).dot(beta);
  return out;
}

Eigen::MatrixXd InterpolationSystem::sample(const Eigen::Ref<const Eigen::MatrixXd> &functions) const
{
  Eigen::MatrixXd out(size(), functions.cols());
  for (Eigen::Index k = 0; k < size(); ++k)
    out.row(k) = functions.row(points_[k]);
  return out;
}

void InterpolationSystem::append(Eigen::Index point, const Eigen::Ref<const Eigen::VectorXd> &basis_function)
{
  const Eigen::Index m = size();
  basis_.conservativeResize(basis_function.size(), m + 1);
  basis_.col(m) = basis_function;
  b_.conservativeResize(m + 1, m + 1);
  for (Eigen::Index k = 0; k < m; ++k)
  {
    b_(m, k) = basis_(point, k);
    b_(k, m) = basis_function[points_[k]];
  }
  b_(m, m) = 1.0;
  points_.push_back(point);
}

void InterpolationSystem::extend(const Eigen::Ref<const Eigen::MatrixXd> &candidates, Eigen::Index target,
                                 int phase)
{
  if (basis_.rows() == 0 && size() == 0)
    basis_.resize(candidates.rows(), 0);
  require(candidates.rows() == evaluation_points(), "extend: candidate evaluation set mismatch");
  const Eigen::Index count = candidates.cols();
  status_ = BuildStatus::Complete;
  if (size() >= target || count == 0)
  {
    if (size() < target)
      status_ = BuildStatus::Exhausted;
    return;
  }

  const double reference = candidates.cwiseAbs().maxCoeff();
  Eigen::MatrixXd residual = candidates;
  if (size() > 0)
  {
    residual.noalias() -= basis_ * coefficient_block(sample(candidates));
    for (auto p : points_)
      residual.row(p).setZero();
  }

  const std::size_t chunks = std::min<std::size_t>(static_cast<std::size_t>(count), 64);
  auto chunk_range = [&](std::size_t c) {
    const Eigen::Index lo = static_cast<Eigen::Index>(c) * count / static_cast<Eigen::Index>(chunks);
    const Eigen::Index hi = static_cast<Eigen::Index>(c + 1) * count / static_cast<Eigen::Index>(chunks);
    return std::pair{lo, hi};
  };
  Eigen::VectorXd sup(count);

  while (size() < target)
  {
    parallel_for(chunks, [&](std::size_t c) {
      const auto [lo, hi] = chunk_range(c);
      for (Eigen::Index j = lo; j < hi; ++j)
        sup[j] = residual.col(j).cwiseAbs().maxCoeff();
    });
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j < count; ++j)
      if (sup[j] > sup[best])
        best = j;
    if (!(reference > 0.0) || !(sup[best] >= kExhaustedTol * reference))
    {
      status_ = BuildStatus::Exhausted;
      return;
    }
    const Eigen::Index point = argmax_abs(residual.col(best));
    Eigen::VectorXd psi = residual.col(best) / residual(point, best);
    psi[point] = 1.0;
    for (auto p : points_)
      psi[p] = 0.0;
    log_.push_back({best, point, sup[best], phase});
    append(point, psi);

    const Eigen::RowVectorXd at_point = residual.row(point);
    parallel_for(chunks, [&](std::size_t c) {
      const auto [lo, hi] = chunk_range(c);
      residual.middleCols(lo, hi - lo).noalias() -= psi * at_point.segment(lo, hi - lo);
    });
    residual.row(point).setZero();
  }
}

void InterpolationSystem::save(const std::string &path, const Eigen::MatrixX2d &coords) const
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw ConfigError("cannot write " + path);
  out.write(kMagic, sizeof(kMagic));
  put<std::int64_t>(out, evaluation_points());
  put<std::int64_t>(out, size());
  put<std::int32_t>(out, status_ == BuildStatus::Complete ? 0 : 1);
  for (auto p : points_)
  {
    put<std::int64_t>(out, p);
    put<double>(out, coords(p, 0));
    put<double>(out, coords(p, 1));
  }
  put_matrix(out, b_);
  put_matrix(out, basis_);
  put<std::int64_t>(out, static_cast<std::int64_t>(log_.size()));
  for (const auto &s : log_)
  {
    put<std::int64_t>(out, s.candidate);
    put<std::int64_t>(out, s.point);
    put<double>(out, s.residual);
    put<std::int32_t>(out, s.phase);
  }
}

InterpolationSystem InterpolationSystem::load(const std::string &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ConfigError("cannot read " + path);
  char magic[sizeof(kMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw ConfigError(path + " is not an interpolation bundle");
  InterpolationSystem s;
  get<std::int64_t>(in);
  const auto m = get<std::int64_t>(in);
  s.status_ = get<std::int32_t>(in) == 0 ? BuildStatus::Complete : BuildStatus::Exhausted;
  for (std::int64_t k = 0; k < m; ++k)
  {
    s.points_.push_back(get<std::int64_t>(in));
    get<double>(in);
    get<double>(in);
  }
  s.b_ = get_matrix(in);
  s.basis_ = get_matrix(in);
  const auto steps = get<std::int64_t>(in);
  for (std::int64_t k = 0; k < steps && in; ++k)
  {
    StepRecord r;
    r.candidate = get<std::int64_t>(in);
    r.point = get<std::int64_t>(in);
    r.residual = get<double>(in);
    r.phase = get<std::int32_t>(in);
    s.log_.push_back(r);
  }
  if (!in || s.b_.rows() != m || s.basis_.cols() != m)
    throw ConfigError("corrupt interpolation bundle " + path);
  return s;
}

InterpolationSystem eim_greedy(const CandidateSpace &candidates, Eigen::Index m)
{
  require(m >= 0, "eim_greedy: negative size");
  InterpolationSystem system(candidates.points());
  system.extend(candidates.values, m, 0);
  return system;
}

InterpolationSystem foeim1_construct(const CandidateSpace &lagrange, const CandidateSpace &taylor,
                                     Eigen::Index m)
{
  InterpolationSystem system = eim_greedy(lagrange, std::min(m, lagrange.size()));
  if (system.size() < m && taylor.size() > 0)
    system.extend(taylor.values, m, 1);
  return system;
}

InterpolationSystem foeim2_construct(const CandidateSpace &lagrange, const CandidateSpace &taylor,
                                     Eigen::Index m)
{
  return eim_greedy(CandidateSpace::combine(lagrange, taylor), m);
}

double lebesgue_constant(const InterpolationSystem &system)
{
  if (system.size() == 0)
    return 0.0;
  // Rows of Psi B^{-1} are the cardinal functions at each point.
  const Eigen::MatrixXd cardinal_t =
    system.matrix().transpose().triangularView<Eigen::UnitUpper>().solve(system.basis().transpose());
  return cardinal_t.cwiseAbs().colwise().sum().maxCoeff();
}

}  // namespace eirb::interp
