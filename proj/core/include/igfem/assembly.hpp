#pragma once

#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "igfem/elements.hpp"
#include "igfem/mesh.hpp"
#include "igfem/solver.hpp"

namespace igfem {

/// Scalar field on the plane, f(x, y).
using ScalarFn = std::function<double(double, double)>;

enum class DofClass { Free, Interpolated, Constrained };

struct DofRef {
  DofClass cls = DofClass::Free;
  /// Global free index, or the position among the element's interpolated
  /// coefficients. Unused for constrained DOFs.
  int index = -1;
};

/// Global numbering of all local basis functions.
struct DofMap {
  /// element_dofs[e][m] classifies local basis function m of element e.
  std::vector<std::vector<DofRef>> element_dofs;
  int free_count = 0;
  int interpolated_count = 0;
  int constrained_count = 0;
  /// Number of free DOFs attached to vertices or edges.
  int shared_free_count = 0;

  int total() const { return free_count + interpolated_count + constrained_count; }
};

/// Numbers shared entities once; boundary vertices/edges are constrained.
DofMap build_dof_map(const Mesh& mesh, const std::vector<LocalElement>& elements);

/// Mesh, elements and numbering of one discretization.
struct Discretization {
  std::shared_ptr<const Mesh> mesh;
  Family family = Family::PkLagrange;
  int degree = 1;
  std::vector<LocalElement> elements;
  DofMap dofs;
};

/// Checks family/degree/mesh compatibility, builds the elements and numbers them.
Discretization make_discretization(std::shared_ptr<const Mesh> mesh, Family family, int k, int threads = 1);
/// Convenience overload building the DOF map directly from mesh and family.
DofMap build_dof_map(const Mesh& mesh, Family family, int k);

/// Element-interior coefficients fixed by f, one per interpolated basis
/// function in local order. Empty for the standard families.
std::vector<double> interior_coefficients(const LocalElement& el, const ScalarFn& f);

/// Local stiffness matrix, int grad(phi_m) . grad(phi_n) summed over the pieces.
Eigen::MatrixXd local_stiffness(const LocalElement& el);
/// Local load vector int f phi_m.
Eigen::VectorXd local_load(const LocalElement& el, const ScalarFn& f);

struct SparseSystem {
  CsrMatrix A;
  std::vector<double> F;
  /// Per element: coefficients of the interpolated basis functions.
  std::vector<std::vector<double>> interior;
};

/// Assembles the reduced Galerkin system for the free DOFs. The interpolated
/// part is moved to the right-hand side. `threads` > 1 computes element
/// contributions in parallel; the global sums stay in serial order.
SparseSystem assemble_system(const Discretization& disc, const ScalarFn& f, int threads = 1);

}  // namespace igfem
