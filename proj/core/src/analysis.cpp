#include "igfem/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "local_eval.hpp"

namespace igfem {

namespace {

int norm_rule_degree(int k) { return std::min(2 * k + 4, kMaxPolyDegree); }

void require_disc(const FeFunction& f) {
  if (!f.disc) throw std::invalid_argument("FeFunction without discretization");
  if (f.local.size() != f.disc->elements.size()) throw std::invalid_argument("FeFunction: coefficient count mismatch");
}

// Coefficients on the P2 nonconforming element fitted to the Gauss values of u.
Eigen::VectorXd p2nc_fit(const LocalElement& el, const Problem& pr) {
  const TriGeom& g = el.geoms[0];
  const auto gp = triangle_gauss_points(g);
  const int nb = static_cast<int>(el.basis.size());
  const int nodal = nb - 1;
  Eigen::MatrixXd M(6, nodal);
  Eigen::VectorXd rhs(6);
  for (int i = 0; i < 6; ++i) {
    for (int m = 0; m < nodal; ++m) M(i, m) = eval(el.basis[m].pieces[0], gp[i]);
    rhs[i] = pr.u(gp[i].x, gp[i].y);
  }
  Eigen::VectorXd c = Eigen::VectorXd::Zero(nb);
  c.head(nodal) = M.completeOrthogonalDecomposition().solve(rhs);
  const Point2 x0 = g.barycenter();
  if (el.family == Family::P2NonconformingInterp) {
    c[nodal] = pr.f(x0.x, x0.y);
    return c;
  }
  // Standard element: the bubble amplitude matches the mean value of u.
  const QuadRule& rule = make_quad_rule(norm_rule_degree(2));
  const double int_u = integrate(g, rule, [&](const Bary& q) {
    const Point2 x = g.point(q);
    return pr.u(x.x, x.y);
  });
  double int_fit = 0.0;
  for (int m = 0; m < nodal; ++m)
    int_fit += c[m] * integrate(g, rule, [&](const Bary& q) { return eval(el.basis[m].pieces[0], q); });
  const double int_bubble = integrate(g, rule, [&](const Bary& q) { return eval(el.basis[nodal].pieces[0], q); });
  c[nodal] = (int_u - int_fit) / int_bubble;
  return c;
}

}  // namespace

FeFunction& FeFunction::operator*=(double s) {
  for (auto& v : local) v *= s;
  return *this;
}

FeFunction zero_function(std::shared_ptr<const Discretization> disc) {
  FeFunction f;
  for (const auto& el : disc->elements) f.local.push_back(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(el.basis.size())));
  f.disc = std::move(disc);
  return f;
}

FeFunction from_solution(std::shared_ptr<const Discretization> disc, const std::vector<double>& free,
                         const std::vector<std::vector<double>>& interior) {
  if (free.size() != static_cast<std::size_t>(disc->dofs.free_count))
    throw std::invalid_argument("from_solution: free coefficient count mismatch");
  FeFunction fn = zero_function(disc);
  for (std::size_t e = 0; e < disc->elements.size(); ++e) {
    const auto& refs = disc->dofs.element_dofs[e];
    for (std::size_t m = 0; m < refs.size(); ++m) {
      if (refs[m].cls == DofClass::Free)
        fn.local[e][m] = free[refs[m].index];
      else if (refs[m].cls == DofClass::Interpolated)
        fn.local[e][m] = interior.at(e).at(refs[m].index);
    }
  }
  return fn;
}

FeFunction interpolate_exact(std::shared_ptr<const Discretization> disc, const Problem& problem) {
  FeFunction fn = zero_function(disc);
  for (std::size_t e = 0; e < disc->elements.size(); ++e) {
    const LocalElement& el = disc->elements[e];
    if (el.family == Family::P2NonconformingInterp || el.family == Family::P2NonconformingStd) {
      fn.local[e] = p2nc_fit(el, problem);
      continue;
    }
    const auto interior = interior_coefficients(el, problem.f);
    for (std::size_t m = 0; m < el.basis.size(); ++m) {
      const DofDescriptor& d = el.basis[m].dof;
      if (d.interpolated())
        fn.local[e][m] = interior.at(static_cast<std::size_t>(disc->dofs.element_dofs[e][m].index));
      else
        fn.local[e][m] = problem.u(d.location.x, d.location.y);
    }
  }
  return fn;
}

double evaluate(const FeFunction& fn, Point2 x) {
  require_disc(fn);
  const auto& els = fn.disc->elements;
  for (std::size_t e = 0; e < els.size(); ++e)
    for (std::size_t p = 0; p < els[e].geoms.size(); ++p) {
      const Bary b = els[e].geoms[p].barycentric(x);
      if (b[0] < -1e-12 || b[1] < -1e-12 || b[2] < -1e-12) continue;
      double s = 0.0;
      for (std::size_t m = 0; m < els[e].basis.size(); ++m) s += fn.local[e][m] * eval(els[e].basis[m].pieces[p], b);
      return s;
    }
  throw std::out_of_range("evaluate: point outside the mesh");
}

namespace {

template <class Exact>
Norms norms_impl(const FeFunction& a, const std::vector<Eigen::VectorXd>& coeffs, Exact&& exact) {
  Norms n;
  const auto& els = a.disc->elements;
  for (std::size_t e = 0; e < els.size(); ++e) {
    const LocalElement& el = els[e];
    const int rd = norm_rule_degree(el.degree);
    const QuadRule& rule = make_quad_rule(rd);
    for (std::size_t p = 0; p < el.geoms.size(); ++p) {
      const TriGeom& g = el.geoms[p];
      const auto v = detail::piece_values(el, static_cast<int>(p), rd, true);
      const Eigen::VectorXd val = v.value * coeffs[e];
      const Eigen::VectorXd gx = v.gx * coeffs[e];
      const Eigen::VectorXd gy = v.gy * coeffs[e];
      double l2 = 0.0, h1 = 0.0;
      for (std::size_t q = 0; q < rule.points.size(); ++q) {
        double d = val[q], dx = gx[q], dy = gy[q];
        exact(g.point(rule.points[q]), d, dx, dy);
        l2 += rule.weights[q] * d * d;
        h1 += rule.weights[q] * (dx * dx + dy * dy);
      }
      n.l2 += g.area() * l2;
      n.h1 += g.area() * h1;
    }
  }
  n.l2 = std::sqrt(n.l2);
  n.h1 = std::sqrt(n.h1);
  return n;
}

}  // namespace

Norms error_norms(const FeFunction& a, const FeFunction& b) {
  require_disc(a);
  require_disc(b);
  if (a.disc != b.disc) throw std::invalid_argument("error_norms: functions live on different discretizations");
  std::vector<Eigen::VectorXd> diff(a.local.size());
  for (std::size_t e = 0; e < diff.size(); ++e) diff[e] = a.local[e] - b.local[e];
  return norms_impl(a, diff, [](Point2, double&, double&, double&) {});
}

Norms error_norms(const FeFunction& a, const Problem& problem) {
  require_disc(a);
  return norms_impl(a, a.local, [&](Point2 x, double& v, double& gx, double& gy) {
    const Eigen::Vector2d gu = problem.grad_u(x.x, x.y);
    v -= problem.u(x.x, x.y);
    gx -= gu.x();
    gy -= gu.y();
  });
}

Norms function_norms(const FeFunction& a) {
  require_disc(a);
  return norms_impl(a, a.local, [](Point2, double&, double&, double&) {});
}

double interior_orthogonality_defect(const FeFunction& uh, const Problem& problem) {
  require_disc(uh);
  double worst = 0.0;
  const auto& els = uh.disc->elements;
  for (std::size_t e = 0; e < els.size(); ++e) {
    const LocalElement& el = els[e];
    const int rd = norm_rule_degree(el.degree);
    const QuadRule& rule = make_quad_rule(rd);
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(el.basis.size()));
    for (std::size_t p = 0; p < el.geoms.size(); ++p) {
      const TriGeom& g = el.geoms[p];
      const auto v = detail::piece_values(el, static_cast<int>(p), rd, false);
      const Eigen::VectorXd gx = v.gx * uh.local[e];
      const Eigen::VectorXd gy = v.gy * uh.local[e];
      Eigen::VectorXd wx(gx.size()), wy(gy.size());
      for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const Point2 x = g.point(rule.points[q]);
        const Eigen::Vector2d gu = problem.grad_u(x.x, x.y);
        wx[q] = rule.weights[q] * (gu.x() - gx[q]);
        wy[q] = rule.weights[q] * (gu.y() - gy[q]);
      }
      acc += g.area() * (v.gx.transpose() * wx + v.gy.transpose() * wy);
    }
    for (std::size_t m = 0; m < el.basis.size(); ++m)
      if (el.basis[m].dof.interpolated()) worst = std::max(worst, std::abs(acc[m]));
  }
  return worst;
}

std::vector<std::optional<double>> convergence_orders(const std::vector<double>& errors) {
  std::vector<std::optional<double>> out(errors.size());
  for (std::size_t i = 1; i < errors.size(); ++i)
    if (errors[i - 1] > 0.0 && errors[i] > 0.0) out[i] = std::log2(errors[i - 1] / errors[i]);
  return out;
}

}  // namespace igfem
