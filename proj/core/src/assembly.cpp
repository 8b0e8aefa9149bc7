#include "igfem/assembly.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <tuple>

#include "local_eval.hpp"
#include "parallel.hpp"

namespace igfem {

namespace {

bool entity_on_boundary(const Mesh& mesh, const DofDescriptor& d) {
  switch (d.entity) {
    case Entity::Vertex: return mesh.vertices()[d.entity_id].boundary;
    case Entity::Edge: return mesh.edges()[d.entity_id].boundary;
    case Entity::Cell: return false;
  }
  return false;
}

int load_rule_degree(int k) { return std::min(2 * k + 4, kMaxPolyDegree); }

}  // namespace

DofMap build_dof_map(const Mesh& mesh, const std::vector<LocalElement>& elements) {
  DofMap map;
  std::map<std::tuple<Entity, int, int>, DofRef> shared;
  map.element_dofs.resize(elements.size());
  for (std::size_t e = 0; e < elements.size(); ++e) {
    int interp = 0;
    for (const auto& b : elements[e].basis) {
      const DofDescriptor& d = b.dof;
      DofRef ref;
      if (d.shared()) {
        const auto key = std::make_tuple(d.entity, d.entity_id, d.slot);
        auto it = shared.find(key);
        if (it == shared.end()) {
          if (entity_on_boundary(mesh, d)) {
            ref = {DofClass::Constrained, -1};
            ++map.constrained_count;
          } else {
            ref = {DofClass::Free, map.free_count++};
            ++map.shared_free_count;
          }
          it = shared.emplace(key, ref).first;
        }
        ref = it->second;
      } else if (d.interpolated()) {
        ref = {DofClass::Interpolated, interp++};
        ++map.interpolated_count;
      } else {
        ref = {DofClass::Free, map.free_count++};
      }
      map.element_dofs[e].push_back(ref);
    }
  }
  return map;
}

Discretization make_discretization(std::shared_ptr<const Mesh> mesh, Family family, int k, int threads) {
  if (!mesh) throw std::invalid_argument("make_discretization: null mesh");
  if (!degree_supported(family, k))
    throw std::invalid_argument("degree " + std::to_string(k) + " not supported by family " +
                                std::string(to_string(family)));
  if (family == Family::P2ConformingInterp && mesh->perturbed())
    throw std::invalid_argument("p2c_interp requires an unperturbed criss-cross mesh");
  Discretization d;
  d.family = family;
  d.degree = polynomial_degree(family, k);
  d.elements = build_elements(*mesh, family, k, threads);
  d.dofs = build_dof_map(*mesh, d.elements);
  d.mesh = std::move(mesh);
  return d;
}

DofMap build_dof_map(const Mesh& mesh, Family family, int k) {
  if (family == Family::P2ConformingInterp && mesh.perturbed())
    throw std::invalid_argument("p2c_interp requires an unperturbed criss-cross mesh");
  return build_dof_map(mesh, build_elements(mesh, family, k));
}

std::vector<double> interior_coefficients(const LocalElement& el, const ScalarFn& f) {
  std::vector<double> c;
  for (const auto& b : el.basis) {
    if (b.dof.kind == DofKind::LaplacianPoint) {
      c.push_back(f(b.dof.location.x, b.dof.location.y));
    } else if (b.dof.kind == DofKind::LaplacianMoment) {
      // G_j(u) = int b p_j Laplacian(u) = -int b p_j f.
      const BPoly& w = el.moment_weights.at(static_cast<std::size_t>(b.dof.slot));
      const TriGeom& g = el.geoms[0];
      const QuadRule& rule = make_quad_rule(load_rule_degree(el.degree));
      c.push_back(-integrate(g, rule, [&](const Bary& q) {
        const Point2 x = g.point(q);
        return eval(w, q) * f(x.x, x.y);
      }));
    }
  }
  return c;
}

Eigen::MatrixXd local_stiffness(const LocalElement& el) {
  const int nb = static_cast<int>(el.basis.size());
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(nb, nb);
  const int rule_degree = std::max(2 * el.degree - 2, 0);
  const QuadRule& rule = make_quad_rule(rule_degree);
  const Eigen::Map<const Eigen::VectorXd> w(rule.weights.data(), static_cast<Eigen::Index>(rule.weights.size()));
  for (std::size_t p = 0; p < el.geoms.size(); ++p) {
    const detail::PieceValues v = detail::piece_values(el, static_cast<int>(p), rule_degree, false);
    const double area = el.geoms[p].area();
    K += area * (v.gx.transpose() * w.asDiagonal() * v.gx + v.gy.transpose() * w.asDiagonal() * v.gy);
  }
  return 0.5 * (K + K.transpose());
}

Eigen::VectorXd local_load(const LocalElement& el, const ScalarFn& f) {
  const int nb = static_cast<int>(el.basis.size());
  Eigen::VectorXd F = Eigen::VectorXd::Zero(nb);
  const int rule_degree = load_rule_degree(el.degree);
  const QuadRule& rule = make_quad_rule(rule_degree);
  for (std::size_t p = 0; p < el.geoms.size(); ++p) {
    const TriGeom& g = el.geoms[p];
    const detail::PieceValues v = detail::piece_values(el, static_cast<int>(p), rule_degree, true);
    Eigen::VectorXd wf(static_cast<Eigen::Index>(rule.points.size()));
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Point2 x = g.point(rule.points[q]);
      wf[static_cast<Eigen::Index>(q)] = rule.weights[q] * f(x.x, x.y);
    }
    F += g.area() * v.value.transpose() * wf;
  }
  return F;
}

SparseSystem assemble_system(const Discretization& disc, const ScalarFn& f, int threads) {
  const auto& els = disc.elements;
  const int ne = static_cast<int>(els.size());
  struct Local {
    Eigen::MatrixXd K;
    Eigen::VectorXd F;
  };
  std::vector<Local> local(ne);
  SparseSystem sys;
  sys.interior.resize(ne);
  detail::parallel_for(ne, threads, [&](int e) {
    local[e].K = local_stiffness(els[e]);
    local[e].F = local_load(els[e], f);
    sys.interior[e] = interior_coefficients(els[e], f);
  });

  std::vector<Triplet> trip;
  sys.F.assign(disc.dofs.free_count, 0.0);
  for (int e = 0; e < ne; ++e) {
    const auto& refs = disc.dofs.element_dofs[e];
    const auto& K = local[e].K;
    const int nb = static_cast<int>(refs.size());
    for (int m = 0; m < nb; ++m) {
      if (refs[m].cls != DofClass::Free) continue;
      double rhs = local[e].F[m];
      for (int j = 0; j < nb; ++j) {
        if (refs[j].cls == DofClass::Free)
          trip.push_back({refs[m].index, refs[j].index, K(m, j)});
        else if (refs[j].cls == DofClass::Interpolated)
          rhs -= K(m, j) * sys.interior[e][refs[j].index];
      }
      sys.F[refs[m].index] += rhs;
    }
  }
  sys.A = CsrMatrix::from_triplets(disc.dofs.free_count, std::move(trip));
  return sys;
}

}  // namespace igfem
