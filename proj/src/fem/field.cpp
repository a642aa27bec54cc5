#include "eirb/fem/field.hpp"

#include <fstream>
#include <iomanip>

namespace eirb::fem
{

Field make_field(const DiscreteSpace &space, Eigen::VectorXd coefficients)
{
  require(coefficients.size() == space.num_nodes(), "make_field: length does not match the space");
  return Field{space.fingerprint(), std::move(coefficients)};
}

Field interpolate(const DiscreteSpace &space, const std::function<double(const Point &)> &f)
{
  Eigen::VectorXd c(space.num_nodes());
  for (Eigen::Index i = 0; i < c.size(); ++i)
    c[i] = f(space.nodes()[i]);
  return make_field(space, std::move(c));
}

FieldSample evaluate_coefficients(const DiscreteSpace &space, const QuadratureSet &at,
                                  const Eigen::Ref<const Eigen::VectorXd> &coefficients)
{
  require(coefficients.size() == space.num_nodes(), "evaluate_field: coefficient length mismatch");
  const int nloc = space.nodes_per_element();
  require(at.values.cols() == nloc, "evaluate_field: quadrature built for another degree");
  FieldSample out;
  out.values.resize(at.size());
  out.dx.resize(at.size());
  out.dy.resize(at.size());
  Eigen::VectorXd local(nloc);
  int current = -1;
  for (Eigen::Index q = 0; q < at.size(); ++q)
  {
    if (at.element[q] != current)
    {
      current = at.element[q];
      auto conn = space.element_nodes(current);
      for (int a = 0; a < nloc; ++a)
        local[a] = coefficients[conn[a]];
    }
    out.values[q] = at.values.row(q).dot(local);
    out.dx[q] = at.dx.row(q).dot(local);
    out.dy[q] = at.dy.row(q).dot(local);
  }
  return out;
}

FieldSample evaluate_field(const DiscreteSpace &space, const Field &field, const QuadratureSet &at)
{
  require(field.space_id == space.fingerprint(), "evaluate_field: field belongs to another space");
  return evaluate_coefficients(space, at, field.coefficients);
}

SampledColumns evaluate_columns(const DiscreteSpace &space, const QuadratureSet &at,
                                const Eigen::Ref<const Eigen::MatrixXd> &coefficients)
{
  require(coefficients.rows() == space.num_nodes(), "evaluate_columns: row count mismatch");
  const int nloc = space.nodes_per_element();
  const Eigen::Index n = coefficients.cols();
  SampledColumns out;
  out.values.resize(at.size(), n);
  out.dx.resize(at.size(), n);
  out.dy.resize(at.size(), n);
  const int per = at.points_per_element();
  Eigen::MatrixXd local(nloc, n);
  for (int e = 0; e < space.num_elements(); ++e)
  {
    auto conn = space.element_nodes(e);
    for (int a = 0; a < nloc; ++a)
      local.row(a) = coefficients.row(conn[a]);
    const Eigen::Index q0 = static_cast<Eigen::Index>(e) * per;
    out.values.middleRows(q0, per).noalias() = at.values.middleRows(q0, per) * local;
    out.dx.middleRows(q0, per).noalias() = at.dx.middleRows(q0, per) * local;
    out.dy.middleRows(q0, per).noalias() = at.dy.middleRows(q0, per) * local;
  }
  return out;
}

double inner_product_x(const DiscreteSpace &space, const Field &w, const Field &v)
{
  require(w.space_id == space.fingerprint() && v.space_id == space.fingerprint(),
          "inner_product_x: fields belong to another space");
  const auto &quad = space.quadrature();
  const auto sw = evaluate_coefficients(space, quad, w.coefficients);
  const auto sv = evaluate_coefficients(space, quad, v.coefficients);
  return (quad.weights.array() * (sw.dx.array() * sv.dx.array() + sw.dy.array() * sv.dy.array()))
    .sum();
}

void write_field_csv(const std::string &path, const DiscreteSpace &space, const Field &field)
{
  require(field.space_id == space.fingerprint(), "write_field_csv: field belongs to another space");
  std::ofstream out(path);
  if (!out)
    throw ConfigError("cannot write " + path);
  out << "x,y,value\n" << std::setprecision(17);
  for (Eigen::Index i = 0; i < space.num_nodes(); ++i)
    out << space.nodes()[i][0] << ',' << space.nodes()[i][1] << ',' << field.coefficients[i]
        << '\n';
}

}  // namespace eirb::fem
