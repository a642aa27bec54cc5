#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace eirb
{

/// A point in the two-dimensional parameter domain.
using Parameter = std::array<double, 2>;

/// A point in the physical domain.
using Point = std::array<double, 2>;

/// Invalid user input: bad geometry, inconsistent experiment config, unknown ids.
class ConfigError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Caller broke a documented precondition (mismatched spaces, wrong lengths).
class ContractViolation : public std::logic_error
{
public:
  using std::logic_error::logic_error;
};

/// A nonlinear solve failed to converge. Carries the residual history so the
/// caller can decide whether to retry (e.g. with parameter continuation).
class SolverError : public std::runtime_error
{
public:
  SolverError(const std::string &what, std::vector<double> history)
    : std::runtime_error(what), residual_history(std::move(history))
  {
  }

  std::vector<double> residual_history;
};

/// Iteration count and residual trace of a Newton solve.
struct NewtonReport
{
  int iterations = 0;
  bool converged = false;
  std::vector<double> residual_history;

  double final_residual() const
  {
    return residual_history.empty() ? 0.0 : residual_history.back();
  }
};

struct NewtonSettings
{
  double tolerance = 1e-10;
  int max_iterations = 50;
};

inline void require(bool condition, std::string_view message)
{
  if (!condition)
    throw ContractViolation(std::string(message));
}

/// 64-bit FNV-1a; stable across runs and platforms, used for cache keys and
/// manifest hashes.
inline std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL)
{
  std::uint64_t h = seed;
  for (unsigned char c : bytes)
  {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value);

}  // namespace eirb
