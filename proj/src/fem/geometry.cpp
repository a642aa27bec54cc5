#include "eirb/fem/geometry.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace eirb
{

std::string hex64(std::uint64_t value)
{
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

}  // namespace eirb

namespace eirb::fem
{

namespace
{
constexpr double kTol = 1e-10;
}

GeometrySpec GeometrySpec::unit_square()
{
  GeometrySpec g;
  g.kind = GeometryKind::UnitSquare;
  g.rectangles = {Rectangle{{0.0, 1.0}, {0.0, 1.0}}};
  g.default_label = BoundaryLabel::Dirichlet;
  return g;
}

GeometrySpec GeometrySpec::t_shape()
{
  GeometrySpec g;
  g.kind = GeometryKind::TShape;
  g.rectangles = {Rectangle{{0.0, 4.0}, {5.0, 6.0}}, Rectangle{{1.5, 2.5}, {0.0, 5.0}}};
  g.segments = {
    BoundarySegment{true, 6.0, {0.0, 4.0}, BoundaryLabel::Dirichlet},
    BoundarySegment{true, 0.0, {1.5, 2.5}, BoundaryLabel::NeumannFlux},
  };
  g.default_label = BoundaryLabel::NeumannZero;
  return g;
}

BoundaryLabel GeometrySpec::label_of(const Point &a, const Point &b) const
{
  for (const auto &s : segments)
  {
    const int along = s.horizontal ? 0 : 1;
    const int across = 1 - along;
    if (std::abs(a[across] - s.position) > kTol || std::abs(b[across] - s.position) > kTol)
      continue;
    const double lo = std::min(a[along], b[along]);
    const double hi = std::max(a[along], b[along]);
    if (lo >= s.range.lo - kTol && hi <= s.range.hi + kTol)
      return s.label;
  }
  return default_label;
}

std::string GeometrySpec::describe() const
{
  std::ostringstream os;
  os.precision(17);
  os << "kind=" << static_cast<int>(kind) << ";default=" << static_cast<int>(default_label);
  for (const auto &r : rectangles)
    os << ";rect=" << r.x.lo << ',' << r.x.hi << ',' << r.y.lo << ',' << r.y.hi;
  for (const auto &s : segments)
    os << ";seg=" << s.horizontal << ',' << s.position << ',' << s.range.lo << ','
       << s.range.hi << ',' << static_cast<int>(s.label);
  return os.str();
}

std::string to_string(BoundaryLabel label)
{
  switch (label)
  {
    case BoundaryLabel::Dirichlet:
      return "dirichlet";
    case BoundaryLabel::NeumannZero:
      return "neumann-zero";
    case BoundaryLabel::NeumannFlux:
      return "neumann-flux";
  }
  return "unknown";
}

}  // namespace eirb::fem
