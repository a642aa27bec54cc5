#include "eirb/rom/metrics.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>

#include "eirb/parallel.hpp"

namespace eirb::rom
{

namespace
{

constexpr char kMagic[8] = {'E', 'I', 'R', 'B', 'F', 'O', 'M', '1'};

double median(std::vector<double> v)
{
  if (v.empty())
    return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

TruthCache::TruthCache(std::string directory) : directory_(std::move(directory))
{
  if (!directory_.empty())
    std::filesystem::create_directories(directory_);
}

std::string TruthCache::key(const fem::TruthModel &model, const Parameter &mu) const
{
  std::ostringstream os;
  os << hex64(model.space().fingerprint()) << '|' << fem::to_string(model.kind()) << '|'
     << hex64(std::bit_cast<std::uint64_t>(model.conductivity_floor())) << '|'
     << hex64(std::bit_cast<std::uint64_t>(mu[0])) << '|' << hex64(std::bit_cast<std::uint64_t>(mu[1]));
  return hex64(fnv1a(os.str()));
}

std::optional<TruthSample> TruthCache::load(const fem::TruthModel &model, const Parameter &mu) const
{
  if (directory_.empty())
    return std::nullopt;
  std::ifstream in(directory_ + "/" + key(model, mu) + ".bin", std::ios::binary);
  if (!in)
    return std::nullopt;
  char magic[sizeof(kMagic)];
  std::int64_t n = 0;
  TruthSample s;
  in.read(magic, sizeof(magic));
  in.read(reinterpret_cast<char *>(&n), sizeof(n));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0 || n != model.space().num_nodes())
    return std::nullopt;
  in.read(reinterpret_cast<char *>(&s.output), sizeof(double));
  in.read(reinterpret_cast<char *>(&s.norm), sizeof(double));
  s.field.resize(n);
  in.read(reinterpret_cast<char *>(s.field.data()), static_cast<std::streamsize>(sizeof(double) * n));
  if (!in)
    return std::nullopt;
  return s;
}

void TruthCache::store(const fem::TruthModel &model, const Parameter &mu, const TruthSample &sample) const
{
  if (directory_.empty())
    return;
  const std::string path = directory_ + "/" + key(model, mu) + ".bin";
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out)
      throw ConfigError("cannot write cache file " + tmp);
    const std::int64_t n = sample.field.size();
    out.write(kMagic, sizeof(kMagic));
    out.write(reinterpret_cast<const char *>(&n), sizeof(n));
    out.write(reinterpret_cast<const char *>(&sample.output), sizeof(double));
    out.write(reinterpret_cast<const char *>(&sample.norm), sizeof(double));
    out.write(reinterpret_cast<const char *>(sample.field.data()),
              static_cast<std::streamsize>(sizeof(double) * n));
  }
  std::filesystem::rename(tmp, path);
}

std::vector<TruthSample> TruthCache::solve_all(const fem::TruthModel &model,
                                               const sampling::SampleSet &samples,
                                               const NewtonSettings &settings)
{
  std::vector<TruthSample> out(samples.size());
  std::mutex count_mutex;
  parallel_for(samples.size(), [&](std::size_t i) {
    const auto &mu = samples.points[i];
    if (auto cached = load(model, mu))
    {
      out[i] = std::move(*cached);
      std::lock_guard lock(count_mutex);
      ++hits_;
      return;
    }
    auto result = model.solve_with_continuation(mu, settings);
    TruthSample s;
    s.field = std::move(result.field.coefficients);
    s.output = result.output;
    s.norm = norm_x(model, s.field);
    store(model, mu, s);
    out[i] = std::move(s);
    std::lock_guard lock(count_mutex);
    ++misses_;
  });
  return out;
}

double norm_x(const fem::TruthModel &model, const Eigen::Ref<const Eigen::VectorXd> &v)
{
  return std::sqrt(std::max(0.0, v.dot(model.stiffness() * v)));
}

ErrorSample error_sample(const fem::TruthModel &model, const Eigen::MatrixXd &basis,
                         const Parameter &mu, const TruthSample &truth, const RomSolution &rb,
                         const RomSolution &ei)
{
  ErrorSample e;
  e.mu = mu;
  e.s_truth = truth.output;
  e.s_rb = rb.output;
  e.s_ei = ei.output;
  e.eps_s_rb = std::abs(truth.output - rb.output);
  e.eps_s_ei = std::abs(truth.output - ei.output);
  e.eps_u_rb = norm_x(model, truth.field - basis * rb.alpha);
  e.eps_u_ei = norm_x(model, truth.field - basis * ei.alpha);
  e.u_norm = truth.norm;
  return e;
}

ErrorReport summarize_errors(std::vector<ErrorSample> samples)
{
  ErrorReport r;
  double s_sum = 0.0, u_sum = 0.0;
  double eta_s = 0.0, eta_u = 0.0;
  std::size_t count_s = 0, count_u = 0;
  for (const auto &e : samples)
  {
    if (e.status != "ok")
    {
      ++r.failed;
      continue;
    }
    s_sum += std::abs(e.s_truth);
    u_sum += e.u_norm;
    r.eps_s_rb += e.eps_s_rb;
    r.eps_s_ei += e.eps_s_ei;
    r.eps_u_rb += e.eps_u_rb;
    r.eps_u_ei += e.eps_u_ei;
    if (e.eps_s_rb < kEffectivityGuard)
      ++r.excluded_s;
    else
    {
      eta_s += e.eps_s_ei / e.eps_s_rb;
      ++count_s;
    }
    if (e.eps_u_rb < kEffectivityGuard)
      ++r.excluded_u;
    else
    {
      eta_u += e.eps_u_ei / e.eps_u_rb;
      ++count_u;
    }
  }
  if (s_sum > 0.0)
  {
    r.eps_s_rb /= s_sum;
    r.eps_s_ei /= s_sum;
  }
  if (u_sum > 0.0)
  {
    r.eps_u_rb /= u_sum;
    r.eps_u_ei /= u_sum;
  }
  r.eta_s = count_s ? eta_s / static_cast<double>(count_s) : std::nan("");
  r.eta_u = count_u ? eta_u / static_cast<double>(count_u) : std::nan("");
  r.samples = std::move(samples);
  return r;
}

TimingTable timing_harness(const std::vector<std::string> &names,
                           const std::vector<std::function<void(const Parameter &)>> &solvers,
                           const std::vector<Parameter> &parameters, int warmup)
{
  require(names.size() == solvers.size() && !solvers.empty(), "timing_harness: names and solvers differ");
  TimingTable table;
  table.names = names;
  for (const auto &solve : solvers)
  {
    for (int w = 0; w < warmup && !parameters.empty(); ++w)
      solve(parameters[static_cast<std::size_t>(w) % parameters.size()]);
    std::vector<double> seconds;
    seconds.reserve(parameters.size());
    for (const auto &mu : parameters)
    {
      const auto t0 = std::chrono::steady_clock::now();
      solve(mu);
      seconds.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    table.median_seconds.push_back(median(std::move(seconds)));
  }
  for (double t : table.median_seconds)
    table.normalized.push_back(table.median_seconds.front() > 0.0 ? t / table.median_seconds.front() : 0.0);
  return table;
}

}  // namespace eirb::rom
