#include "eirb/fem/nonlinear.hpp"

#include <cmath>

namespace eirb::fem
{

std::string NonlinearTerm::name() const
{
  switch (id_)
  {
    case TermId::Elliptic:
      return "elliptic-g";
    case TermId::Gaussian:
      return "gaussian-g";
    case TermId::DiffusionG:
      return "diffusion-g";
    case TermId::DiffusionH:
      return "diffusion-h";
  }
  return "unknown";
}

std::array<double, 3> NonlinearTerm::conductivity(double u, const Parameter &mu) const
{
  const double d = u - mu[1];
  const double bump = std::exp(-d * d);
  const double scale = 1.0 / (1.0 + floor_);
  return {(floor_ + bump) * scale, -2.0 * d * bump * scale, 2.0 * d * bump * scale};
}

PointEval NonlinearTerm::evaluate(double u, double grad, const Parameter &mu) const
{
  PointEval r;
  switch (id_)
  {
    case TermId::Elliptic:
    {
      const double s = std::sin(mu[1] * u);
      const double c = std::cos(mu[1] * u);
      r.value = std::exp(s);
      r.d_u = mu[1] * c * r.value;
      r.d_mu = {0.0, u * c * r.value};
      break;
    }
    case TermId::Gaussian:
      r.value = std::exp(-0.01 * u * u);
      r.d_u = -0.02 * u * r.value;
      break;
    case TermId::DiffusionG:
    case TermId::DiffusionH:
    {
      const auto [k, dk_du, dk_dmu2] = conductivity(u, mu);
      r.value = k * grad;
      r.d_u = dk_du * grad;
      r.d_grad = k;
      r.d_mu = {0.0, dk_dmu2 * grad};
      break;
    }
  }
  return r;
}

TermSamples nonlinear_eval(const NonlinearTerm &term, const Eigen::Ref<const Eigen::VectorXd> &u,
                           const Eigen::VectorXd *gradient, const Parameter &mu)
{
  if (term.needs_gradient())
    require(gradient != nullptr && gradient->size() == u.size(),
            "nonlinear_eval: " + term.name() + " needs the solution gradient");
  const Eigen::Index n = u.size();
  TermSamples out;
  out.value.resize(n);
  out.d_u.resize(n);
  out.d_grad.resize(n);
  out.d_mu.resize(n, 2);
  for (Eigen::Index i = 0; i < n; ++i)
  {
    const auto e = term.evaluate(u[i], gradient ? (*gradient)[i] : 0.0, mu);
    out.value[i] = e.value;
    out.d_u[i] = e.d_u;
    out.d_grad[i] = e.d_grad;
    out.d_mu(i, 0) = e.d_mu[0];
    out.d_mu(i, 1) = e.d_mu[1];
  }
  return out;
}

}  // namespace eirb::fem
