#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include <Eigen/Core>

#include "eirb/fem/space.hpp"

namespace eirb::fem
{

/// Coefficient vector of a finite element function, tagged with the
/// fingerprint of the space it lives in.
struct Field
{
  std::uint64_t space_id = 0;
  Eigen::VectorXd coefficients;
};

Field make_field(const DiscreteSpace &space, Eigen::VectorXd coefficients);

/// Nodal interpolant of a scalar function. Exact for polynomials of degree <= p.
Field interpolate(const DiscreteSpace &space, const std::function<double(const Point &)> &f);

/// Per-point values and physical gradients.
struct FieldSample
{
  Eigen::VectorXd values;
  Eigen::VectorXd dx;
  Eigen::VectorXd dy;
};

FieldSample evaluate_field(const DiscreteSpace &space, const Field &field, const QuadratureSet &at);

/// Same as evaluate_field for a raw coefficient vector.
FieldSample evaluate_coefficients(const DiscreteSpace &space, const QuadratureSet &at,
                                  const Eigen::Ref<const Eigen::VectorXd> &coefficients);

/// Column-wise evaluation of many coefficient vectors: each output is
/// (points x columns).
struct SampledColumns
{
  Eigen::MatrixXd values;
  Eigen::MatrixXd dx;
  Eigen::MatrixXd dy;
};

SampledColumns evaluate_columns(const DiscreteSpace &space, const QuadratureSet &at,
                                const Eigen::Ref<const Eigen::MatrixXd> &coefficients);

/// (w, v)_X = a(w, v), integrated with the truth quadrature.
double inner_product_x(const DiscreteSpace &space, const Field &w, const Field &v);

/// Writes "x,y,value" per node.
void write_field_csv(const std::string &path, const DiscreteSpace &space, const Field &field);

}  // namespace eirb::fem
