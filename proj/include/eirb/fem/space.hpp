#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "eirb/fem/geometry.hpp"

namespace eirb::fem
{

struct Resolution
{
  int nx = 1;
  int ny = 1;
};

/// Tensor-product Gauss-Legendre points over every element, with the local
/// shape functions and their physical gradients tabulated at each point.
/// Points are stored element-major; point q belongs to element element[q].
struct QuadratureSet
{
  int points_per_direction = 0;
  std::vector<int> element;
  Eigen::MatrixX2d coords;
  Eigen::VectorXd weights;
  Eigen::MatrixXd values;  // (points x local shape functions)
  Eigen::MatrixXd dx;
  Eigen::MatrixXd dy;

  Eigen::Index size() const { return weights.size(); }
  int points_per_element() const { return points_per_direction * points_per_direction; }
};

/// Exterior element edge. Sides are numbered bottom, right, top, left.
struct BoundaryEdge
{
  int element = 0;
  int side = 0;
  BoundaryLabel label = BoundaryLabel::Dirichlet;
};

/// Continuous Lagrange space of degree p on a structured quadrilateral mesh of
/// a rectangle union. Immutable after construction.
class DiscreteSpace
{
public:
  /// Throws ConfigError on degenerate rectangles or non-conforming interfaces.
  static DiscreteSpace build(const GeometrySpec &geometry, std::span<const Resolution> resolution,
                             int degree);

  const GeometrySpec &geometry() const { return geometry_; }
  const std::vector<Resolution> &resolution() const { return resolution_; }
  int degree() const { return degree_; }
  int nodes_per_element() const { return (degree_ + 1) * (degree_ + 1); }

  Eigen::Index num_nodes() const { return static_cast<Eigen::Index>(nodes_.size()); }
  int num_elements() const { return static_cast<int>(origin_.size()); }

  const std::vector<Point> &nodes() const { return nodes_; }
  std::span<const int> element_nodes(int e) const
  {
    return {connectivity_.data() + static_cast<std::size_t>(e) * nodes_per_element(),
            static_cast<std::size_t>(nodes_per_element())};
  }
  const Point &element_origin(int e) const { return origin_[e]; }
  const Point &element_size(int e) const { return size_[e]; }

  const std::vector<char> &dirichlet_mask() const { return dirichlet_; }
  const std::vector<BoundaryEdge> &boundary_edges() const { return boundary_edges_; }

  /// The truth quadrature, (p+1) Gauss points per direction.
  const QuadratureSet &quadrature() const { return quadrature_; }

  /// Content hash of geometry, resolution and degree; identical inputs give
  /// identical fingerprints across runs.
  std::uint64_t fingerprint() const { return fingerprint_; }

  double area() const;

private:
  GeometrySpec geometry_;
  std::vector<Resolution> resolution_;
  int degree_ = 1;
  std::vector<Point> nodes_;
  std::vector<int> connectivity_;
  std::vector<Point> origin_;
  std::vector<Point> size_;
  std::vector<char> dirichlet_;
  std::vector<BoundaryEdge> boundary_edges_;
  QuadratureSet quadrature_;
  std::uint64_t fingerprint_ = 0;

  friend QuadratureSet quadrature_points(const DiscreteSpace &, int);
};

/// Tabulates a Gauss-Legendre rule with `points_per_direction` points per
/// axis on every element. Requires points_per_direction >= degree + 1.
QuadratureSet quadrature_points(const DiscreteSpace &space, int points_per_direction);

/// Gauss-Legendre nodes and weights on [0,1].
void gauss_legendre(int n, std::vector<double> &nodes, std::vector<double> &weights);

/// Equispaced 1D Lagrange basis of degree p on [0,1] evaluated at t.
void lagrange_1d(int degree, double t, std::span<double> values, std::span<double> derivatives);

}  // namespace eirb::fem
