#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "igfem/mesh.hpp"
#include "igfem/poly.hpp"

namespace igfem {

enum class Family {
  P2ConformingInterp,     // P2 macro element on criss-cross squares
  P2NonconformingInterp,  // piecewise harmonic P2 + interpolated bubble
  P2NonconformingStd,     // Fortin-Soulie P2 nonconforming
  P3Interp,               // nodal boundary values + Laplacian at barycenter
  PkInterp,               // nodal boundary values + Laplacian moments, k >= 4
  PkLagrange,             // standard nodal Pk
};

std::string_view to_string(Family f);
std::optional<Family> family_from_string(std::string_view s);

/// True for families whose element-interior coefficients come from f.
bool is_interpolated(Family f);
/// True when `f` accepts polynomial degree `k`.
bool degree_supported(Family f, int k);
/// Degree of the local polynomials.
int polynomial_degree(Family f, int k);

enum class DofKind {
  BoundaryNode,     // value at a node on the element boundary; shared
  InteriorNode,     // Lagrange value at an interior lattice point
  Bubble,           // amplitude of the Fortin-Soulie bubble (standard element)
  LaplacianPoint,   // -Laplacian at a point (interpolated)
  LaplacianMoment,  // Laplacian moment against b * p_j (interpolated)
};

enum class Entity { Vertex, Edge, Cell };

struct DofDescriptor {
  DofKind kind = DofKind::BoundaryNode;
  Point2 location{};
  Entity entity = Entity::Vertex;
  int entity_id = -1;
  /// Along an edge: node index counted from the lower vertex id. Moment index
  /// for LaplacianMoment. Zero otherwise.
  int slot = 0;

  bool shared() const { return kind == DofKind::BoundaryNode; }
  bool interpolated() const { return kind == DofKind::LaplacianPoint || kind == DofKind::LaplacianMoment; }
};

struct LocalBasisFunction {
  DofDescriptor dof;
  std::vector<BPoly> pieces;  // one per element piece
};

/// Local basis of one element. Macro elements carry four pieces (one per
/// sub-triangle); all other elements one.
struct LocalElement {
  Family family = Family::PkLagrange;
  int degree = 1;
  int cell = -1;                // triangle id, or macro-square id for P2C
  std::vector<int> triangles;   // mesh triangles, aligned with pieces
  std::vector<TriGeom> geoms;
  std::vector<LocalBasisFunction> basis;
  /// b * p_j for the Laplacian-moment functionals (PkInterp only).
  std::vector<BPoly> moment_weights;

  int shared_count() const;
  int interpolated_count() const;
  /// Local slots that enter the global Galerkin system.
  int free_slot_count() const { return static_cast<int>(basis.size()) - interpolated_count(); }
};

class UnisolvenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---- P2 conforming macro element -------------------------------------------

/// B-net c1..c13 of the macro element from the 8 nodal values (corners then
/// side midpoints, both counter-clockwise from the lower-left corner) and the
/// Laplacian value on a square of the given side length.
std::array<double, 13> p2c_bnet(const std::array<double, 8>& nodal, double laplacian, double side);

/// The four quadratic pieces (bottom, right, top, left) of a macro B-net.
/// Corner order of `corners` as in MacroSquare; `center` is the square center.
std::array<BPoly, 4> p2c_pieces(const std::array<double, 13>& c, const std::array<Point2, 4>& corners, Point2 center);

LocalElement build_p2c_macro_basis(const Mesh& mesh, int macro);

// ---- P2 nonconforming -------------------------------------------------------

/// Quadratic bubble vanishing at the six edge Gauss points with Laplacian -1.
BPoly build_fs_bubble(const TriGeom& geom);

/// Six edge Gauss points of a triangle, two per edge, edges in order v0v1, v1v2, v2v0.
std::array<Point2, 6> triangle_gauss_points(const TriGeom& geom);

LocalElement build_p2nc_element(const Mesh& mesh, int tri, bool interpolated);

// ---- P3 interpolated ----------------------------------------------------------

/// Scaled cubic bubble b / (-Laplacian(b)(x0)); Laplacian -1 at the barycenter.
BPoly p3_interior_function(const TriGeom& geom);
/// The 27 lambda_0 lambda_1 lambda_2 bubble (value 1 at the barycenter).
BPoly cubic_bubble(const TriGeom& geom);

LocalElement build_p3_basis(const Mesh& mesh, int tri);

// ---- Pk interpolated (k >= 4) ---------------------------------------------

/// Orthonormal basis of P_{k-3} under (u, v) = int grad(b u) . grad(b v).
std::vector<BPoly> gram_schmidt_pj(const TriGeom& geom, int k);

/// Dual basis of {F_i, G_j} on one triangle.
struct PkDualBasis {
  std::vector<std::array<int, 3>> boundary_nodes;  // lattice multi-indices, 3k of them
  std::vector<BPoly> phi;                           // dual to the nodal functionals
  std::vector<BPoly> psi;                           // dual to the moment functionals
  std::vector<BPoly> p;                             // orthonormal p_j
  double vandermonde_rcond = 0.0;
};

PkDualBasis pk_dual_basis(const TriGeom& geom, int k);

/// Applies the moment functional G_j(u) = int p_j b Laplacian(u).
double laplacian_moment(const BPoly& u, const BPoly& pj);

LocalElement build_pk_basis(const Mesh& mesh, int tri, int k);

// ---- Lagrange -----------------------------------------------------------------

/// Nodal Lagrange basis on the uniform degree-k lattice, in B-net order.
std::vector<BPoly> lagrange_basis(const TriGeom& geom, int k);

LocalElement build_lagrange_basis(const Mesh& mesh, int tri, int k);

// ---- all elements of a mesh ---------------------------------------------------

/// Builds every element of `family` on `mesh` (macro squares for P2C,
/// triangles otherwise). `threads` > 1 builds in parallel.
std::vector<LocalElement> build_elements(const Mesh& mesh, Family family, int k, int threads = 1);

/// Descriptor of lattice point `alpha` of degree k on triangle `tri`.
DofDescriptor lattice_descriptor(const Mesh& mesh, int tri, int k, const std::array<int, 3>& alpha);

}  // namespace igfem
