#pragma once

#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "igfem/assembly.hpp"
#include "igfem/problems.hpp"

namespace igfem {

/// A finite element function stored as local coefficients per element, in
/// the order of the element's basis.
struct FeFunction {
  std::shared_ptr<const Discretization> disc;
  std::vector<Eigen::VectorXd> local;

  FeFunction& operator*=(double s);
};

/// Zero function on `disc`.
FeFunction zero_function(std::shared_ptr<const Discretization> disc);

/// Combines free coefficients with the interpolated part; constrained DOFs are zero.
FeFunction from_solution(std::shared_ptr<const Discretization> disc, const std::vector<double>& free,
                         const std::vector<std::vector<double>>& interior);

/// The interpolant I_h u. Boundary nodes take u(node), interior functionals
/// take the f-derived values, Lagrange interior nodes u(node). The P2
/// nonconforming families fit u at the six edge Gauss points by least squares.
FeFunction interpolate_exact(std::shared_ptr<const Discretization> disc, const Problem& problem);

/// Value of `fn` at x (linear search for the containing triangle).
double evaluate(const FeFunction& fn, Point2 x);

struct Norms {
  double l2 = 0.0;
  double h1 = 0.0;  // broken H1 seminorm

  friend bool operator==(const Norms&, const Norms&) = default;
};

/// Norms of a - b; both must live on the same discretization.
Norms error_norms(const FeFunction& a, const FeFunction& b);
/// Norms of u - a.
Norms error_norms(const FeFunction& a, const Problem& problem);
/// Norms of a.
Norms function_norms(const FeFunction& a);

/// Largest |int grad(u - u_h) . grad(phi)| over all interpolated basis
/// functions phi of all elements.
double interior_orthogonality_defect(const FeFunction& uh, const Problem& problem);

/// log2(e[i-1] / e[i]); undefined for the first level and when an error is zero.
std::vector<std::optional<double>> convergence_orders(const std::vector<double>& errors);

struct ErrorRecord {
  int level = 0;
  double h = 0.0;
  int free_dofs = 0;
  int interp_dofs = 0;
  Norms ih;        // I_h u - u_h
  Norms true_err;  // u - u_h
  std::optional<double> order_l2;
  std::optional<double> order_h1;

  friend bool operator==(const ErrorRecord&, const ErrorRecord&) = default;
};

}  // namespace igfem
