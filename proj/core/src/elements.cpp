#include "igfem/elements.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "parallel.hpp"

namespace igfem {

std::string_view to_string(Family f) {
  switch (f) {
    case Family::P2ConformingInterp: return "p2c_interp";
    case Family::P2NonconformingInterp: return "p2nc_interp";
    case Family::P2NonconformingStd: return "p2nc_std";
    case Family::P3Interp: return "p3_interp";
    case Family::PkInterp: return "pk_interp";
    case Family::PkLagrange: return "pk_lagrange";
  }
  return "unknown";
}

std::optional<Family> family_from_string(std::string_view s) {
  for (Family f : {Family::P2ConformingInterp, Family::P2NonconformingInterp, Family::P2NonconformingStd,
                   Family::P3Interp, Family::PkInterp, Family::PkLagrange})
    if (to_string(f) == s) return f;
  return std::nullopt;
}

bool is_interpolated(Family f) {
  return f == Family::P2ConformingInterp || f == Family::P2NonconformingInterp || f == Family::P3Interp ||
         f == Family::PkInterp;
}

bool degree_supported(Family f, int k) {
  switch (f) {
    case Family::P2ConformingInterp:
    case Family::P2NonconformingInterp:
    case Family::P2NonconformingStd: return k == 2;
    case Family::P3Interp: return k == 3;
    case Family::PkInterp: return k >= 4 && k <= 6;
    case Family::PkLagrange: return k >= 1 && k <= 6;
  }
  return false;
}

int polynomial_degree(Family f, int k) {
  switch (f) {
    case Family::P2ConformingInterp:
    case Family::P2NonconformingInterp:
    case Family::P2NonconformingStd: return 2;
    case Family::P3Interp: return 3;
    default: return k;
  }
}

int LocalElement::shared_count() const {
  int c = 0;
  for (const auto& b : basis) c += b.dof.shared() ? 1 : 0;
  return c;
}

int LocalElement::interpolated_count() const {
  int c = 0;
  for (const auto& b : basis) c += b.dof.interpolated() ? 1 : 0;
  return c;
}

DofDescriptor lattice_descriptor(const Mesh& mesh, int tri, int k, const std::array<int, 3>& alpha) {
  const auto& t = mesh.triangles()[tri];
  const TriGeom geom(mesh.triangle_points(tri));
  DofDescriptor d;
  d.location = geom.point({double(alpha[0]) / k, double(alpha[1]) / k, double(alpha[2]) / k});
  int zeros = 0;
  int zero_at = -1;
  for (int i = 0; i < 3; ++i)
    if (alpha[i] == 0) {
      ++zeros;
      zero_at = i;
    }
  if (zeros == 2) {
    const int i = alpha[0] == k ? 0 : (alpha[1] == k ? 1 : 2);
    d.kind = DofKind::BoundaryNode;
    d.entity = Entity::Vertex;
    d.entity_id = t.v[i];
    return d;
  }
  if (zeros == 1) {
    const int e = (zero_at + 1) % 3;
    const int a = e;
    const int b = (e + 1) % 3;
    const int lower = t.v[a] < t.v[b] ? a : b;
    d.kind = DofKind::BoundaryNode;
    d.entity = Entity::Edge;
    d.entity_id = t.edge[e];
    d.slot = k - alpha[lower] - 1;
    return d;
  }
  d.kind = DofKind::InteriorNode;
  d.entity = Entity::Cell;
  d.entity_id = tri;
  return d;
}

namespace {

LocalElement single_piece(const Mesh& mesh, Family family, int degree, int tri) {
  LocalElement el;
  el.family = family;
  el.degree = degree;
  el.cell = tri;
  el.triangles = {tri};
  el.geoms = {TriGeom(mesh.triangle_points(tri))};
  return el;
}

std::vector<std::array<int, 3>> boundary_lattice(int k) {
  std::vector<std::array<int, 3>> out;
  for (const auto& a : multi_indices(k))
    if (a[0] == 0 || a[1] == 0 || a[2] == 0) out.push_back(a);
  return out;
}

}  // namespace

// ---- P2 conforming macro ------------------------------------------------------

std::array<double, 13> p2c_bnet(const std::array<double, 8>& u, double laplacian, double side) {
  std::array<double, 13> c{};
  for (int i = 0; i < 4; ++i) c[i] = u[i];
  for (int s = 0; s < 4; ++s) c[4 + s] = 2.0 * u[4 + s] - 0.5 * (c[s] + c[(s + 1) % 4]);
  // Laplacian measured on the [-1, 1]^2 reference square.
  const double t = laplacian * 0.25 * side * side;
  const double sum = c[0] + c[1] + c[2] + c[3];
  c[8] = 0.25 * (sum - 2.0 * t);
  for (int s = 0; s < 4; ++s) c[9 + s] = 0.25 * (2.0 * c[s] + c[(s + 1) % 4] + c[(s + 3) % 4] - 2.0 * t);
  return c;
}

std::array<BPoly, 4> p2c_pieces(const std::array<double, 13>& c, const std::array<Point2, 4>& corners, Point2 center) {
  std::array<BPoly, 4> out;
  for (int s = 0; s < 4; ++s) {
    const int s1 = (s + 1) % 4;
    const TriGeom g({corners[s], corners[s1], center});
    // Quadratic B-net order: v0, v0v1, v0v2, v1, v1v2, v2.
    out[s] = BPoly(2, {c[s], c[4 + s], c[9 + s], c[s1], c[9 + s1], c[8]}, g);
  }
  return out;
}

LocalElement build_p2c_macro_basis(const Mesh& mesh, int macro) {
  if (mesh.perturbed()) throw GeometryError("P2 conforming macro element requires an unperturbed criss-cross mesh");
  const auto& sq = mesh.macro_squares().at(static_cast<std::size_t>(macro));
  std::array<Point2, 4> corners;
  for (int i = 0; i < 4; ++i) corners[i] = mesh.vertices()[sq.corner[i]].p;
  const Point2 center = mesh.vertices()[sq.center].p;
  const double side = distance(corners[0], corners[1]);
  for (int i = 0; i < 4; ++i) {
    const Point2 e0 = corners[(i + 1) % 4] - corners[i];
    const Point2 e1 = corners[(i + 2) % 4] - corners[(i + 1) % 4];
    if (std::abs(std::hypot(e0.x, e0.y) - side) > 1e-12 * side || std::abs(e0.x * e1.x + e0.y * e1.y) > 1e-12 * side * side)
      throw GeometryError("macro cell " + std::to_string(macro) + " is not a square");
  }
  if (distance(center, 0.25 * (corners[0] + corners[1] + corners[2] + corners[3])) > 1e-12 * side)
    throw GeometryError("macro cell " + std::to_string(macro) + " center is off the diagonal crossing");

  LocalElement el;
  el.family = Family::P2ConformingInterp;
  el.degree = 2;
  el.cell = macro;
  for (int s = 0; s < 4; ++s) {
    el.triangles.push_back(sq.tri[s]);
    el.geoms.emplace_back(mesh.triangle_points(sq.tri[s]));
  }
  for (int d = 0; d < 9; ++d) {
    std::array<double, 8> nodal{};
    double lap = 0.0;
    if (d < 8)
      nodal[d] = 1.0;
    else
      lap = -1.0;
    const auto pieces = p2c_pieces(p2c_bnet(nodal, lap, side), corners, center);
    LocalBasisFunction f;
    f.pieces.assign(pieces.begin(), pieces.end());
    if (d < 4) {
      f.dof = {DofKind::BoundaryNode, corners[d], Entity::Vertex, sq.corner[d], 0};
    } else if (d < 8) {
      f.dof = {DofKind::BoundaryNode, sq.side_mid[d - 4], Entity::Edge, sq.side_edge[d - 4], 0};
    } else {
      f.dof = {DofKind::LaplacianPoint, center, Entity::Cell, macro, 0};
    }
    el.basis.push_back(std::move(f));
  }
  return el;
}

// ---- P2 nonconforming ---------------------------------------------------------

BPoly build_fs_bubble(const TriGeom& geom) {
  // 2 - 3 (l0^2 + l1^2 + l2^2): B-coefficient -1 at vertices, 2 at edge midpoints.
  const double grad_sq = geom.lambda_gram().trace();
  const double s = 1.0 / (6.0 * grad_sq);
  return BPoly(2, {-s, 2 * s, 2 * s, -s, 2 * s, -s}, geom);
}

std::array<Point2, 6> triangle_gauss_points(const TriGeom& geom) {
  const auto& v = geom.vertices();
  std::array<Point2, 6> g;
  for (int e = 0; e < 3; ++e) {
    const auto [a, b] = edge_gauss_points(v[e], v[(e + 1) % 3]);
    g[2 * e] = a;
    g[2 * e + 1] = b;
  }
  return g;
}

LocalElement build_p2nc_element(const Mesh& mesh, int tri, bool interpolated) {
  LocalElement el = single_piece(mesh, interpolated ? Family::P2NonconformingInterp : Family::P2NonconformingStd, 2, tri);
  const TriGeom& g = el.geoms[0];
  const BPoly bubble = build_fs_bubble(g);
  const auto eta = lagrange_basis(g, 2);
  const auto& mi = multi_indices(2);
  for (std::size_t a = 0; a < eta.size(); ++a) {
    LocalBasisFunction f;
    f.dof = lattice_descriptor(mesh, tri, 2, mi[a]);
    if (interpolated) {
      const double lap = laplacian(eta[a]).coeffs()[0];
      f.pieces = {eta[a] + lap * bubble};
    } else {
      f.pieces = {eta[a]};
    }
    el.basis.push_back(std::move(f));
  }
  LocalBasisFunction b;
  b.dof = {interpolated ? DofKind::LaplacianPoint : DofKind::Bubble, g.barycenter(), Entity::Cell, tri, 0};
  b.pieces = {bubble};
  // The standard element uses the unit-height bubble 2 - 3 sum(lambda_i^2), which
  // keeps its stiffness entries on the scale of the nodal functions.
  if (!interpolated) b.pieces[0] *= 6.0 * g.lambda_gram().trace();
  el.basis.push_back(std::move(b));
  return el;
}

// ---- P3 -----------------------------------------------------------------------

BPoly cubic_bubble(const TriGeom& geom) {
  BPoly b = BPoly::zero(3, geom);
  // 27 l0 l1 l2 = 4.5 * B_{111}
  b.coeffs()[multi_index_position(3, 1, 1)] = 4.5;
  return b;
}

BPoly p3_interior_function(const TriGeom& geom) {
  BPoly b = cubic_bubble(geom);
  const double lap0 = eval(laplacian(b), Bary{1.0 / 3, 1.0 / 3, 1.0 / 3});
  b *= -1.0 / lap0;
  return b;
}

LocalElement build_p3_basis(const Mesh& mesh, int tri) {
  LocalElement el = single_piece(mesh, Family::P3Interp, 3, tri);
  const TriGeom& g = el.geoms[0];
  const BPoly phi0 = p3_interior_function(g);
  const auto eta = lagrange_basis(g, 3);
  const auto& mi = multi_indices(3);
  const Bary x0{1.0 / 3, 1.0 / 3, 1.0 / 3};
  for (std::size_t a = 0; a < eta.size(); ++a) {
    const DofDescriptor d = lattice_descriptor(mesh, tri, 3, mi[a]);
    if (!d.shared()) continue;
    const double lap = eval(laplacian(eta[a]), x0);
    el.basis.push_back({d, {eta[a] + lap * phi0}});
  }
  el.basis.push_back({{DofKind::LaplacianPoint, g.barycenter(), Entity::Cell, tri, 0}, {phi0}});
  return el;
}

// ---- Pk interpolated ------------------------------------------------------------

std::vector<BPoly> gram_schmidt_pj(const TriGeom& geom, int k) {
  if (k < 3) throw std::invalid_argument("gram_schmidt_pj: k must be >= 3");
  const int m = k - 3;
  const Point2 c = geom.barycenter();
  const double scale = geom.diameter();
  std::vector<std::array<int, 2>> powers;
  for (int d = 0; d <= m; ++d)
    for (int a = d; a >= 0; --a) powers.push_back({a, d - a});
  const int n = static_cast<int>(powers.size());

  const BPoly b = cubic_bubble(geom);
  std::vector<BPoly> mono, bmono;
  for (const auto& pw : powers) {
    auto fn = [&](double x, double y) {
      return std::pow((x - c.x) / scale, pw[0]) * std::pow((y - c.y) / scale, pw[1]);
    };
    mono.push_back(from_function(m, geom, fn));
    bmono.push_back(multiply(b, mono.back()));
  }

  const QuadRule& rule = make_quad_rule(std::max(2 * k - 2, 0));
  Eigen::MatrixXd gram(n, n);
  std::vector<std::vector<Eigen::Vector2d>> grads(n);
  for (int i = 0; i < n; ++i)
    for (const auto& q : rule.points) grads[i].push_back(grad(bmono[i], q));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      double s = 0.0;
      for (std::size_t q = 0; q < rule.points.size(); ++q) s += rule.weights[q] * grads[i][q].dot(grads[j][q]);
      gram(i, j) = gram(j, i) = geom.area() * s;
    }

  // Modified Gram-Schmidt on coefficient vectors w.r.t. the monomials.
  Eigen::MatrixXd r = Eigen::MatrixXd::Identity(n, n);
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd v = r.col(j);
    for (int i = 0; i < j; ++i) v -= (r.col(i).dot(gram * v)) * r.col(i);
    const double nrm2 = v.dot(gram * v);
    if (!(nrm2 > 1e-14 * gram(j, j)))
      throw UnisolvenceError("gram_schmidt_pj: singular bubble Gram matrix (degenerate triangle?)");
    r.col(j) = v / std::sqrt(nrm2);
  }

  std::vector<BPoly> p;
  for (int j = 0; j < n; ++j) {
    BPoly pj = BPoly::zero(m, geom);
    for (int i = 0; i < n; ++i) pj += r(i, j) * mono[i];
    p.push_back(std::move(pj));
  }
  return p;
}

double laplacian_moment(const BPoly& u, const BPoly& pj) {
  const TriGeom& g = u.geom();
  if (u.degree() < 2) return 0.0;
  const BPoly lap = laplacian(u);
  const BPoly weight = multiply(cubic_bubble(g), pj);
  const QuadRule& rule = make_quad_rule(std::min(lap.degree() + weight.degree(), 16));
  return integrate(g, rule, [&](const Bary& q) { return eval(weight, q) * eval(lap, q); });
}

PkDualBasis pk_dual_basis(const TriGeom& geom, int k) {
  if (k < 4) throw std::invalid_argument("pk_dual_basis: k must be >= 4");
  PkDualBasis out;
  out.boundary_nodes = boundary_lattice(k);
  out.p = gram_schmidt_pj(geom, k);
  const int nb = static_cast<int>(out.boundary_nodes.size());
  const int nm = static_cast<int>(out.p.size());
  const int n = bernstein_dim(k);
  if (nb + nm != n) throw std::logic_error("pk_dual_basis: functional count mismatch");

  const QuadRule& rule = make_quad_rule(2 * k);
  const BPoly b = cubic_bubble(geom);
  std::vector<BPoly> weights;
  for (const auto& pj : out.p) weights.push_back(multiply(b, pj));

  Eigen::MatrixXd v(n, n);
  for (int col = 0; col < n; ++col) {
    BPoly basis = BPoly::zero(k, geom);
    basis.coeffs()[col] = 1.0;
    for (int r = 0; r < nb; ++r) {
      const auto& a = out.boundary_nodes[r];
      v(r, col) = eval(basis, Bary{double(a[0]) / k, double(a[1]) / k, double(a[2]) / k});
    }
    const BPoly lap = laplacian(basis);
    for (int j = 0; j < nm; ++j)
      v(nb + j, col) = integrate(geom, rule, [&](const Bary& q) { return eval(weights[j], q) * eval(lap, q); });
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(v);
  out.vandermonde_rcond = lu.rcond();
  if (!lu.isInvertible() || out.vandermonde_rcond < 1e-14) {
    std::ostringstream os;
    os.precision(17);
    os << "Pk unisolvence failure (k=" << k << ") on triangle";
    for (const auto& p : geom.vertices()) os << " (" << p.x << ", " << p.y << ")";
    throw UnisolvenceError(os.str());
  }
  const Eigen::MatrixXd c = lu.inverse();
  for (int m = 0; m < n; ++m) {
    BPoly f(k, std::vector<double>(c.col(m).data(), c.col(m).data() + n), geom);
    (m < nb ? out.phi : out.psi).push_back(std::move(f));
  }
  return out;
}

LocalElement build_pk_basis(const Mesh& mesh, int tri, int k) {
  LocalElement el = single_piece(mesh, Family::PkInterp, k, tri);
  const TriGeom& g = el.geoms[0];
  PkDualBasis dual = pk_dual_basis(g, k);
  const BPoly b = cubic_bubble(g);
  for (const auto& pj : dual.p) el.moment_weights.push_back(multiply(b, pj));
  for (std::size_t i = 0; i < dual.phi.size(); ++i)
    el.basis.push_back({lattice_descriptor(mesh, tri, k, dual.boundary_nodes[i]), {std::move(dual.phi[i])}});
  for (std::size_t j = 0; j < dual.psi.size(); ++j)
    el.basis.push_back(
        {{DofKind::LaplacianMoment, g.barycenter(), Entity::Cell, tri, static_cast<int>(j)}, {std::move(dual.psi[j])}});
  return el;
}

// ---- Lagrange ---------------------------------------------------------------------

std::vector<BPoly> lagrange_basis(const TriGeom& geom, int k) {
  if (k < 1) throw std::invalid_argument("lagrange_basis: k must be >= 1");
  const int n = bernstein_dim(k);
  std::vector<BPoly> out;
  out.reserve(n);
  std::vector<double> e(n, 0.0);
  for (int a = 0; a < n; ++a) {
    e[a] = 1.0;
    out.push_back(from_point_values(k, e, geom));
    e[a] = 0.0;
  }
  return out;
}

LocalElement build_lagrange_basis(const Mesh& mesh, int tri, int k) {
  LocalElement el = single_piece(mesh, Family::PkLagrange, k, tri);
  auto basis = lagrange_basis(el.geoms[0], k);
  const auto& mi = multi_indices(k);
  int interior = 0;
  for (std::size_t a = 0; a < basis.size(); ++a) {
    DofDescriptor d = lattice_descriptor(mesh, tri, k, mi[a]);
    if (!d.shared()) d.slot = interior++;
    el.basis.push_back({d, {std::move(basis[a])}});
  }
  return el;
}

std::vector<LocalElement> build_elements(const Mesh& mesh, Family family, int k, int threads) {
  if (!degree_supported(family, k))
    throw std::invalid_argument("degree " + std::to_string(k) + " not supported by family " +
                                std::string(to_string(family)));
  const int count = family == Family::P2ConformingInterp ? static_cast<int>(mesh.macro_squares().size())
                                                          : static_cast<int>(mesh.triangles().size());
  std::vector<LocalElement> out(count);
  detail::parallel_for(count, threads, [&](int e) {
    switch (family) {
      case Family::P2ConformingInterp: out[e] = build_p2c_macro_basis(mesh, e); break;
      case Family::P2NonconformingInterp: out[e] = build_p2nc_element(mesh, e, true); break;
      case Family::P2NonconformingStd: out[e] = build_p2nc_element(mesh, e, false); break;
      case Family::P3Interp: out[e] = build_p3_basis(mesh, e); break;
      case Family::PkInterp: out[e] = build_pk_basis(mesh, e, k); break;
      case Family::PkLagrange: out[e] = build_lagrange_basis(mesh, e, k); break;
    }
  });
  return out;
}

}  // namespace igfem
