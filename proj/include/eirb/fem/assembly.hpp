#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "eirb/fem/space.hpp"

namespace eirb::fem
{

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Compressed sparsity of the element-coupling graph plus, for each element,
/// the value slots of its (nloc x nloc) block. Lets repeated assemblies write
/// straight into the value array without triplet sorting.
class SparsePattern
{
public:
  explicit SparsePattern(const DiscreteSpace &space);

  /// A zero-valued matrix with the full pattern.
  SparseMatrix zero() const { return zero_; }

  /// Slot of local entry (a, b) of element e in valuePtr(): row a, column b.
  int slot(int e, int a, int b) const
  {
    return slots_[(static_cast<std::size_t>(e) * nloc_ + b) * nloc_ + a];
  }

  /// Zero Dirichlet rows and columns and put 1 on their diagonal.
  void apply_dirichlet(SparseMatrix &m, const std::vector<char> &mask) const;

private:
  int nloc_;
  SparseMatrix zero_;
  std::vector<int> slots_;
};

/// a(phi_i, phi_j) = int grad phi_i . grad phi_j over all nodes (no boundary
/// elimination).
SparseMatrix assemble_stiffness(const DiscreteSpace &space);

/// int c(x) phi_i phi_j with c given per truth quadrature point.
SparseMatrix assemble_weighted_mass(const DiscreteSpace &space,
                                    const Eigen::Ref<const Eigen::VectorXd> &coefficient);

/// Right-hand side functional: either a volume density integrated against
/// every basis function, or a flux density on all exterior edges carrying
/// `target` label.
struct SourceFunctional
{
  enum class Kind
  {
    Volume,
    BoundaryFlux
  };

  Kind kind = Kind::Volume;
  std::function<double(const Point &)> density;
  BoundaryLabel target = BoundaryLabel::NeumannFlux;

  static SourceFunctional volume(std::function<double(const Point &)> f)
  {
    return {Kind::Volume, std::move(f), BoundaryLabel::NeumannFlux};
  }
  static SourceFunctional flux(std::function<double(const Point &)> f,
                               BoundaryLabel on = BoundaryLabel::NeumannFlux)
  {
    return {Kind::BoundaryFlux, std::move(f), on};
  }
};

/// Throws ConfigError for a flux functional whose label carries no edges.
Eigen::VectorXd assemble_load(const DiscreteSpace &space, const SourceFunctional &f);

}  // namespace eirb::fem
