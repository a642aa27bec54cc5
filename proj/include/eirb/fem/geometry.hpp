#pragma once

#include <string>
#include <vector>

#include "eirb/common.hpp"

namespace eirb::fem
{

enum class GeometryKind
{
  UnitSquare,
  TShape,
  RectangleUnion
};

enum class BoundaryLabel
{
  Dirichlet,
  NeumannZero,
  NeumannFlux
};

struct Interval
{
  double lo = 0.0;
  double hi = 1.0;

  double length() const { return hi - lo; }
};

struct Rectangle
{
  Interval x;
  Interval y;
};

/// An axis-aligned piece of the exterior boundary. Horizontal segments sit at
/// y = position and span `range` in x; vertical ones the other way round.
struct BoundarySegment
{
  bool horizontal = true;
  double position = 0.0;
  Interval range;
  BoundaryLabel label = BoundaryLabel::Dirichlet;
};

/// Union of axis-aligned rectangles plus boundary labels. Exterior edges not
/// covered by any segment get `default_label`.
struct GeometrySpec
{
  GeometryKind kind = GeometryKind::RectangleUnion;
  std::vector<Rectangle> rectangles;
  std::vector<BoundarySegment> segments;
  BoundaryLabel default_label = BoundaryLabel::Dirichlet;

  /// (0,1)^2 with homogeneous Dirichlet data on the whole boundary.
  static GeometrySpec unit_square();

  /// Bar [0,4]x[5,6] on top of stem [1.5,2.5]x[0,5]. Dirichlet on the top
  /// edge, prescribed flux on the stem bottom, insulated elsewhere.
  static GeometrySpec t_shape();

  /// Label of the exterior edge between points a and b.
  BoundaryLabel label_of(const Point &a, const Point &b) const;

  std::string describe() const;
};

std::string to_string(BoundaryLabel label);

}  // namespace eirb::fem
