#include "eirb/fem/assembly.hpp"

#include <algorithm>

namespace eirb::fem
{

SparsePattern::SparsePattern(const DiscreteSpace &space) : nloc_(space.nodes_per_element())
{
  const Eigen::Index n = space.num_nodes();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(space.num_elements()) * nloc_ * nloc_);
  for (int e = 0; e < space.num_elements(); ++e)
  {
    auto conn = space.element_nodes(e);
    for (int b = 0; b < nloc_; ++b)
      for (int a = 0; a < nloc_; ++a)
        triplets.emplace_back(conn[a], conn[b], 0.0);
  }
  zero_.resize(n, n);
  zero_.setFromTriplets(triplets.begin(), triplets.end());
  zero_.makeCompressed();

  const int *outer = zero_.outerIndexPtr();
  const int *inner = zero_.innerIndexPtr();
  slots_.resize(triplets.size());
  for (int e = 0; e < space.num_elements(); ++e)
  {
    auto conn = space.element_nodes(e);
    for (int b = 0; b < nloc_; ++b)
      for (int a = 0; a < nloc_; ++a)
      {
        const int col = conn[b];
        const int *first = inner + outer[col];
        const int *last = inner + outer[col + 1];
        const int *it = std::lower_bound(first, last, conn[a]);
        slots_[(static_cast<std::size_t>(e) * nloc_ + b) * nloc_ + a] = static_cast<int>(it - inner);
      }
  }
}

void SparsePattern::apply_dirichlet(SparseMatrix &m, const std::vector<char> &mask) const
{
  for (int col = 0; col < m.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(m, col); it; ++it)
      if (mask[it.row()] || mask[col])
        it.valueRef() = it.row() == col ? 1.0 : 0.0;
}

namespace
{

template <class LocalKernel>
SparseMatrix assemble_with(const DiscreteSpace &space, LocalKernel &&kernel)
{
  SparsePattern pattern(space);
  SparseMatrix m = pattern.zero();
  double *values = m.valuePtr();
  const int nloc = space.nodes_per_element();
  const auto &quad = space.quadrature();
  const int per = quad.points_per_element();
  Eigen::MatrixXd local(nloc, nloc);
  for (int e = 0; e < space.num_elements(); ++e)
  {
    local.setZero();
    const Eigen::Index q0 = static_cast<Eigen::Index>(e) * per;
    for (int k = 0; k < per; ++k)
      kernel(q0 + k, local);
    for (int b = 0; b < nloc; ++b)
      for (int a = 0; a < nloc; ++a)
        values[pattern.slot(e, a, b)] += local(a, b);
  }
  return m;
}

}  // namespace

SparseMatrix assemble_stiffness(const DiscreteSpace &space)
{
  const auto &quad = space.quadrature();
  return assemble_with(space, [&](Eigen::Index q, Eigen::MatrixXd &local) {
    const double w = quad.weights[q];
    local.noalias() += w * (quad.dx.row(q).transpose() * quad.dx.row(q) +
                            quad.dy.row(q).transpose() * quad.dy.row(q));
  });
}

SparseMatrix assemble_weighted_mass(const DiscreteSpace &space,
                                    const Eigen::Ref<const Eigen::VectorXd> &coefficient)
{
  const auto &quad = space.quadrature();
  require(coefficient.size() == quad.size(), "assemble_weighted_mass: one coefficient per point");
  return assemble_with(space, [&](Eigen::Index q, Eigen::MatrixXd &local) {
    local.noalias() += (quad.weights[q] * coefficient[q]) *
                       (quad.values.row(q).transpose() * quad.values.row(q));
  });
}

Eigen::VectorXd assemble_load(const DiscreteSpace &space, const SourceFunctional &f)
{
  require(static_cast<bool>(f.density), "assemble_load: missing density");
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(space.num_nodes());
  const int nloc = space.nodes_per_element();
  const int p = space.degree();

  if (f.kind == SourceFunctional::Kind::Volume)
  {
    const auto &quad = space.quadrature();
    for (Eigen::Index q = 0; q < quad.size(); ++q)
    {
      const double wf = quad.weights[q] * f.density({quad.coords(q, 0), quad.coords(q, 1)});
      auto conn = space.element_nodes(quad.element[q]);
      for (int a = 0; a < nloc; ++a)
        rhs[conn[a]] += wf * quad.values(q, a);
    }
    return rhs;
  }

  std::vector<double> t, w;
  gauss_legendre(p + 1, t, w);
  std::vector<double> val(p + 1), der(p + 1);
  bool any = false;
  for (const auto &edge : space.boundary_edges())
  {
    if (edge.label != f.target)
      continue;
    any = true;
    const auto o = space.element_origin(edge.element);
    const auto h = space.element_size(edge.element);
    auto conn = space.element_nodes(edge.element);
    const bool horizontal = edge.side == 0 || edge.side == 2;
    const double length = horizontal ? h[0] : h[1];
    for (std::size_t q = 0; q < t.size(); ++q)
    {
      lagrange_1d(p, t[q], val, der);
      Point x{};
      switch (edge.side)
      {
        case 0: x = {o[0] + h[0] * t[q], o[1]}; break;
        case 1: x = {o[0] + h[0], o[1] + h[1] * t[q]}; break;
        case 2: x = {o[0] + h[0] * t[q], o[1] + h[1]}; break;
        default: x = {o[0], o[1] + h[1] * t[q]}; break;
      }
      const double wf = w[q] * length * f.density(x);
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
        rhs[conn[b * (p + 1) + a]] += wf * val[k];
      }
    }
  }
  if (!any)
    throw ConfigError("assemble_load: no boundary edges carry the " + to_string(f.target) +
                      " label");
  return rhs;
}

}  // namespace eirb::fem
