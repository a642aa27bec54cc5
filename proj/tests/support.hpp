#pragma once

#include <random>

#include <Eigen/Core>

#include "eirb/fem/problem.hpp"

namespace eirb::testing
{

/// Unit square with nx x nx elements of degree p.
inline fem::DiscreteSpace square_space(int nx, int degree)
{
  const fem::Resolution r{nx, nx};
  return fem::DiscreteSpace::build(fem::GeometrySpec::unit_square(), std::span(&r, 1), degree);
}

inline Eigen::VectorXd random_vector(Eigen::Index n, std::mt19937_64 &rng, double scale = 1.0)
{
  std::uniform_real_distribution<double> d(-scale, scale);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i)
    v[i] = d(rng);
  return v;
}

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64 &rng)
{
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    m.col(j) = random_vector(rows, rng);
  return m;
}

/// Relative error with a unit floor on the denominator.
inline double relative_error(double approx, double exact)
{
  return std::abs(approx - exact) / std::max(1.0, std::abs(exact));
}

}  // namespace eirb::testing
