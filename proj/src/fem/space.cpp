#include "eirb/fem/space.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>

namespace eirb::fem
{

namespace
{

constexpr double kTol = 1e-10;

struct NodeKey
{
  long long x, y;
  auto operator<=>(const NodeKey &) const = default;
};

NodeKey key_of(const Point &p)
{
  // Structured node coordinates are rational; 1e-9 resolution separates any
  // two distinct nodes of a reasonable mesh while merging rounding noise.
  return {std::llround(p[0] * 1e9), std::llround(p[1] * 1e9)};
}

// Shared boundary segment of two rectangles, if any, as (horizontal, position, overlap).
struct SharedEdge
{
  bool horizontal;
  double position;
  Interval overlap;
};

std::vector<SharedEdge> shared_edges(const Rectangle &a, const Rectangle &b)
{
  std::vector<SharedEdge> out;
  auto overlap = [](Interval p, Interval q) {
    return Interval{std::max(p.lo, q.lo), std::min(p.hi, q.hi)};
  };
  for (double ya : {a.y.lo, a.y.hi})
    for (double yb : {b.y.lo, b.y.hi})
      if (std::abs(ya - yb) < kTol)
      {
        Interval o = overlap(a.x, b.x);
        bool opposite = (ya == a.y.lo) != (yb == b.y.lo);
        if (o.length() > kTol && opposite)
          out.push_back({true, ya, o});
      }
  for (double xa : {a.x.lo, a.x.hi})
    for (double xb : {b.x.lo, b.x.hi})
      if (std::abs(xa - xb) < kTol)
      {
        Interval o = overlap(a.y, b.y);
        bool opposite = (xa == a.x.lo) != (xb == b.x.lo);
        if (o.length() > kTol && opposite)
          out.push_back({false, xa, o});
      }
  return out;
}

// 1D coordinates of a rectangle's nodes along one of its sides, restricted to a range.
std::vector<double> side_coordinates(const Rectangle &r, const Resolution &res, int degree,
                                     bool horizontal, Interval range)
{
  std::vector<double> out;
  const Interval along = horizontal ? r.x : r.y;
  const int n = (horizontal ? res.nx : res.ny) * degree;
  for (int i = 0; i <= n; ++i)
  {
    double t = along.lo + along.length() * i / n;
    if (t >= range.lo - kTol && t <= range.hi + kTol)
      out.push_back(t);
  }
  return out;
}

bool on_other_rectangle_boundary(const std::vector<Rectangle> &rects, std::size_t self,
                                 const Point &a, const Point &b)
{
  const Point mid{0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])};
  for (std::size_t r = 0; r < rects.size(); ++r)
  {
    if (r == self)
      continue;
    const auto &R = rects[r];
    bool inside_x = mid[0] >= R.x.lo - kTol && mid[0] <= R.x.hi + kTol;
    bool inside_y = mid[1] >= R.y.lo - kTol && mid[1] <= R.y.hi + kTol;
    if (inside_x && inside_y)
      return true;
  }
  return false;
}

}  // namespace

void gauss_legendre(int n, std::vector<double> &nodes, std::vector<double> &weights)
{
  require(n >= 1, "gauss_legendre: need at least one point");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < n; ++i)
  {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter)
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k)
      {
        double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
        break;
    }
    // Recompute the derivative at the converged root for the weight.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k)
    {
      double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    nodes[i] = 0.5 * (1.0 - x);
    weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return nodes[a] < nodes[b]; });
  std::vector<double> sn(n), sw(n);
  for (int i = 0; i < n; ++i)
  {
    sn[i] = nodes[order[i]];
    sw[i] = weights[order[i]];
  }
  nodes = std::move(sn);
  weights = std::move(sw);
}

void lagrange_1d(int degree, double t, std::span<double> values, std::span<double> derivatives)
{
  const int n = degree + 1;
  for (int i = 0; i < n; ++i)
  {
    const double ti = static_cast<double>(i) / degree;
    double v = 1.0;
    double d = 0.0;
    for (int j = 0; j < n; ++j)
    {
      if (j == i)
        continue;
      const double tj = static_cast<double>(j) / degree;
      const double inv = 1.0 / (ti - tj);
      d = d * (t - tj) * inv + v * inv;
      v *= (t - tj) * inv;
    }
    values[i] = v;
    derivatives[i] = d;
  }
}

DiscreteSpace DiscreteSpace::build(const GeometrySpec &geometry,
                                   std::span<const Resolution> resolution, int degree)
{
  if (degree < 1)
    throw ConfigError("build_space: degree must be >= 1");
  if (geometry.rectangles.empty())
    throw ConfigError("build_space: geometry has no rectangles");
  if (resolution.size() != geometry.rectangles.size())
    throw ConfigError("build_space: need one resolution per rectangle");

  const auto &rects = geometry.rectangles;
  for (std::size_t r = 0; r < rects.size(); ++r)
  {
    if (!(rects[r].x.length() > kTol) || !(rects[r].y.length() > kTol))
      throw ConfigError("build_space: degenerate rectangle " + std::to_string(r));
    if (resolution[r].nx < 1 || resolution[r].ny < 1)
      throw ConfigError("build_space: resolution must be >= 1");
  }

  // Interior overlap, interface conformity and edge-connectivity.
  std::vector<int> parent(rects.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[i] != i)
      i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t a = 0; a < rects.size(); ++a)
    for (std::size_t b = a + 1; b < rects.size(); ++b)
    {
      const double ox = std::min(rects[a].x.hi, rects[b].x.hi) - std::max(rects[a].x.lo, rects[b].x.lo);
      const double oy = std::min(rects[a].y.hi, rects[b].y.hi) - std::max(rects[a].y.lo, rects[b].y.lo);
      if (ox > kTol && oy > kTol)
        throw ConfigError("build_space: rectangles overlap in their interiors");
      for (const auto &edge : shared_edges(rects[a], rects[b]))
      {
        auto ca = side_coordinates(rects[a], resolution[a], degree, edge.horizontal, edge.overlap);
        auto cb = side_coordinates(rects[b], resolution[b], degree, edge.horizontal, edge.overlap);
        bool ok = ca.size() == cb.size();
        for (std::size_t i = 0; ok && i < ca.size(); ++i)
          ok = std::abs(ca[i] - cb[i]) < 1e-9;
        // The overlap ends must be nodes of both sides, otherwise elements hang.
        ok = ok && !ca.empty() && std::abs(ca.front() - edge.overlap.lo) < 1e-9 &&
             std::abs(ca.back() - edge.overlap.hi) < 1e-9;
        if (!ok)
          throw ConfigError("build_space: non-conforming interface between rectangles " +
                            std::to_string(a) + " and " + std::to_string(b));
        parent[find(static_cast<int>(a))] = find(static_cast<int>(b));
      }
    }
  for (std::size_t r = 1; r < rects.size(); ++r)
    if (find(static_cast<int>(r)) != find(0))
      throw ConfigError("build_space: rectangle union is not edge-connected");

  DiscreteSpace s;
  s.geometry_ = geometry;
  s.resolution_.assign(resolution.begin(), resolution.end());
  s.degree_ = degree;
  const int p = degree;
  const int nloc = (p + 1) * (p + 1);

  std::map<NodeKey, int> index;
  auto node_id = [&](const Point &pt) {
    auto [it, inserted] = index.try_emplace(key_of(pt), static_cast<int>(s.nodes_.size()));
    if (inserted)
      s.nodes_.push_back(pt);
    return it->second;
  };

  for (std::size_t r = 0; r < rects.size(); ++r)
  {
    const auto &R = rects[r];
    const auto res = resolution[r];
    const int gx = res.nx * p + 1;
    const int gy = res.ny * p + 1;
    std::vector<int> grid(static_cast<std::size_t>(gx) * gy);
    for (int j = 0; j < gy; ++j)
      for (int i = 0; i < gx; ++i)
      {
        Point pt{R.x.lo + R.x.length() * i / (gx - 1), R.y.lo + R.y.length() * j / (gy - 1)};
        grid[static_cast<std::size_t>(j) * gx + i] = node_id(pt);
      }
    const double hx = R.x.length() / res.nx;
    const double hy = R.y.length() / res.ny;
    for (int ey = 0; ey < res.ny; ++ey)
      for (int ex = 0; ex < res.nx; ++ex)
      {
        const int e = static_cast<int>(s.origin_.size());
        s.origin_.push_back({R.x.lo + ex * hx, R.y.lo + ey * hy});
        s.size_.push_back({hx, hy});
        for (int b = 0; b < p + 1; ++b)
          for (int a = 0; a < p + 1; ++a)
            s.connectivity_.push_back(grid[static_cast<std::size_t>(ey * p + b) * gx + ex * p + a]);

        // Exterior sides of this element: bottom, right, top, left.
        const Point o = s.origin_.back();
        const std::array<std::pair<Point, Point>, 4> sides{{
          {{o[0], o[1]}, {o[0] + hx, o[1]}},
          {{o[0] + hx, o[1]}, {o[0] + hx, o[1] + hy}},
          {{o[0], o[1] + hy}, {o[0] + hx, o[1] + hy}},
          {{o[0], o[1]}, {o[0], o[1] + hy}},
        }};
        const std::array<bool, 4> on_rect_boundary{ey == 0, ex == res.nx - 1, ey == res.ny - 1, ex == 0};
        for (int side = 0; side < 4; ++side)
        {
          if (!on_rect_boundary[side])
            continue;
          const auto &[a, b] = sides[side];
          if (on_other_rectangle_boundary(rects, r, a, b))
            continue;
          s.boundary_edges_.push_back({e, side, geometry.label_of(a, b)});
        }
      }
  }
  (void)nloc;

  s.dirichlet_.assign(s.nodes_.size(), 0);
  for (const auto &edge : s.boundary_edges_)
  {
    if (edge.label != BoundaryLabel::Dirichlet)
      continue;
    auto conn = s.element_nodes(edge.element);
    for (int k = 0; k <= p; ++k)
    {
      int a = 0, b = 0;
      switch (edge.side)
      {
        case 0: a = k; b = 0; break;
        case 1: a = p; b = k; break;
        case 2: a = k; b = p; break;
        default: a = 0; b = k; break;
      }
      s.dirichlet_[conn[b * (p + 1) + a]] = 1;
    }
  }

  std::ostringstream desc;
  desc << geometry.describe() << ";degree=" << degree;
  for (const auto &res : resolution)
    desc << ";res=" << res.nx << 'x' << res.ny;
  s.fingerprint_ = fnv1a(desc.str());

  s.quadrature_ = quadrature_points(s, p + 1);
  return s;
}

double DiscreteSpace::area() const
{
  double a = 0.0;
  for (const auto &r : geometry_.rectangles)
    a += r.x.length() * r.y.length();
  return a;
}

QuadratureSet quadrature_points(const DiscreteSpace &space, int points_per_direction)
{
  const int p = space.degree();
  require(points_per_direction >= p + 1, "quadrature_points: rule order must be >= degree + 1");
  std::vector<double> t, w;
  gauss_legendre(points_per_direction, t, w);

  const int nq1 = points_per_direction;
  const int nloc = space.nodes_per_element();
  std::vector<double> val(static_cast<std::size_t>(nq1) * (p + 1));
  std::vector<double> der(val.size());
  for (int q = 0; q < nq1; ++q)
    lagrange_1d(p, t[q], std::span(val).subspan(q * (p + 1), p + 1),
                std::span(der).subspan(q * (p + 1), p + 1));

  const int ne = space.num_elements();
  const Eigen::Index total = static_cast<Eigen::Index>(ne) * nq1 * nq1;
  QuadratureSet qs;
  qs.points_per_direction = nq1;
  qs.element.resize(total);
  qs.coords.resize(total, 2);
  qs.weights.resize(total);
  qs.values.resize(total, nloc);
  qs.dx.resize(total, nloc);
  qs.dy.resize(total, nloc);

  Eigen::Index q = 0;
  for (int e = 0; e < ne; ++e)
  {
    const auto o = space.element_origin(e);
    const auto h = space.element_size(e);
    for (int qy = 0; qy < nq1; ++qy)
      for (int qx = 0; qx < nq1; ++qx, ++q)
      {
        qs.element[q] = e;
        qs.coords(q, 0) = o[0] + h[0] * t[qx];
        qs.coords(q, 1) = o[1] + h[1] * t[qy];
        qs.weights[q] = w[qx] * w[qy] * h[0] * h[1];
        for (int b = 0; b <= p; ++b)
          for (int a = 0; a <= p; ++a)
          {
            const int loc = b * (p + 1) + a;
            const double vx = val[qx * (p + 1) + a], dxr = der[qx * (p + 1) + a];
            const double vy = val[qy * (p + 1) + b], dyr = der[qy * (p + 1) + b];
            qs.values(q, loc) = vx * vy;
            qs.dx(q, loc) = dxr * vy / h[0];
            qs.dy(q, loc) = vx * dyr / h[1];
          }
      }
  }
  return qs;
}

}  // namespace eirb::fem
