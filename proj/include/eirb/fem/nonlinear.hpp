#pragma once

#include <string>

#include <Eigen/Core>

#include "eirb/common.hpp"

namespace eirb::fem
{

enum class TermId
{
  Elliptic,    // exp(sin(mu2 u))
  Gaussian,    // exp(-0.01 u^2)
  DiffusionG,  // kappa(u, mu) du/dx1
  DiffusionH   // kappa(u, mu) du/dx2
};

/// Pointwise value and first derivatives of a nonlinear term. For the
/// gradient-dependent diffusion fluxes, `d_u` holds the derivative with the
/// gradient frozen and `d_grad` the derivative with respect to the consumed
/// gradient component.
struct PointEval
{
  double value = 0.0;
  double d_u = 0.0;
  double d_grad = 0.0;
  Parameter d_mu{0.0, 0.0};
};

/// Default background conductivity of the diffusion problem; see
/// `NonlinearTerm::conductivity`.
inline constexpr double kDefaultConductivityFloor = 1.0;

class NonlinearTerm
{
public:
  static NonlinearTerm elliptic() { return NonlinearTerm(TermId::Elliptic); }
  static NonlinearTerm gaussian() { return NonlinearTerm(TermId::Gaussian); }
  static NonlinearTerm diffusion_g(double floor = kDefaultConductivityFloor)
  {
    return NonlinearTerm(TermId::DiffusionG, floor);
  }
  static NonlinearTerm diffusion_h(double floor = kDefaultConductivityFloor)
  {
    return NonlinearTerm(TermId::DiffusionH, floor);
  }

  TermId id() const { return id_; }
  std::string name() const;
  bool needs_gradient() const { return id_ == TermId::DiffusionG || id_ == TermId::DiffusionH; }
  /// 0 for du/dx1, 1 for du/dx2, -1 when the term does not read the gradient.
  int gradient_component() const
  {
    return id_ == TermId::DiffusionG ? 0 : id_ == TermId::DiffusionH ? 1 : -1;
  }
  double conductivity_floor() const { return floor_; }

  /// `grad` is the gradient component the term consumes; ignored otherwise.
  PointEval evaluate(double u, double grad, const Parameter &mu) const;

  /// Normalized Gaussian conductivity (c + exp(-(u - mu2)^2)) / (1 + c), with
  /// background c = conductivity_floor(). Peaks at 1 for u = mu2.
  /// Returns value, d/du and d/dmu2.
  std::array<double, 3> conductivity(double u, const Parameter &mu) const;

private:
  explicit NonlinearTerm(TermId id, double floor = 0.0) : id_(id), floor_(floor) {}

  TermId id_;
  double floor_;
};

struct TermSamples
{
  Eigen::VectorXd value;
  Eigen::VectorXd d_u;
  Eigen::VectorXd d_grad;
  Eigen::MatrixX2d d_mu;
};

/// Evaluates a term at every point. `gradient` must be supplied (same length
/// as `u`) when the term needs it; throws ContractViolation otherwise.
TermSamples nonlinear_eval(const NonlinearTerm &term, const Eigen::Ref<const Eigen::VectorXd> &u,
                           const Eigen::VectorXd *gradient, const Parameter &mu);

}  // namespace eirb::fem
