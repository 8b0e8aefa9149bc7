#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "igfem/mesh.hpp"

namespace igfem {

/// Barycentric coordinates (lambda_0, lambda_1, lambda_2).
using Bary = std::array<double, 3>;

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Affine data of one triangle: vertices, area and the constant gradients of
/// the barycentric coordinates.
class TriGeom {
 public:
  TriGeom() = default;
  explicit TriGeom(const std::array<Point2, 3>& v);

  const std::array<Point2, 3>& vertices() const { return v_; }
  double area() const { return area_; }
  const std::array<Eigen::Vector2d, 3>& grad_lambda() const { return grad_; }
  /// Gram matrix of the barycentric gradients, g(i, j) = grad lambda_i . grad lambda_j.
  const Eigen::Matrix3d& lambda_gram() const { return gram_; }

  Point2 point(const Bary& b) const;
  Bary barycentric(Point2 p) const;
  Point2 barycenter() const;
  double diameter() const;

 private:
  std::array<Point2, 3> v_{};
  double area_ = 0.0;
  std::array<Eigen::Vector2d, 3> grad_{};
  Eigen::Matrix3d gram_ = Eigen::Matrix3d::Zero();
};

constexpr int kMaxPolyDegree = 16;

inline int bernstein_dim(int k) { return (k + 1) * (k + 2) / 2; }

/// Position of multi-index (i, j, l), i + j + l = k, in the lexicographic
/// order that starts with (k, 0, 0), (k-1, 1, 0), (k-1, 0, 1), ...
inline int multi_index_position(int k, int i, int j) { return (k - i) * (k - i + 1) / 2 + (k - i - j); }

/// All multi-indices of degree k in storage order.
const std::vector<std::array<int, 3>>& multi_indices(int k);

/// Domain points alpha / k of the degree-k B-net, in storage order.
std::vector<Bary> domain_points(int k);

/// A polynomial on one triangle in Bernstein-Bezier form.
class BPoly {
 public:
  BPoly() = default;
  BPoly(int degree, std::vector<double> coeffs, const TriGeom& geom);
  static BPoly zero(int degree, const TriGeom& geom);
  /// The constant `value` written as a degree-k polynomial.
  static BPoly constant(int degree, double value, const TriGeom& geom);
  /// Barycentric coordinate lambda_i as a degree-1 polynomial.
  static BPoly lambda(int i, const TriGeom& geom);

  int degree() const { return degree_; }
  const std::vector<double>& coeffs() const { return c_; }
  std::vector<double>& coeffs() { return c_; }
  const TriGeom& geom() const { return geom_; }

  BPoly& operator+=(const BPoly& o);
  BPoly& operator-=(const BPoly& o);
  BPoly& operator*=(double s);
  friend BPoly operator+(BPoly a, const BPoly& b) { return a += b; }
  friend BPoly operator-(BPoly a, const BPoly& b) { return a -= b; }
  friend BPoly operator*(double s, BPoly a) { return a *= s; }

 private:
  int degree_ = 0;
  std::vector<double> c_{0.0};
  TriGeom geom_;
};

/// de Casteljau evaluation; bary need not lie inside the triangle.
double eval(const BPoly& p, const Bary& b);
double eval(const BPoly& p, Point2 x);
Eigen::Vector2d grad(const BPoly& p, const Bary& b);

/// Exact Laplacian as a polynomial of degree k - 2. Requires k >= 2.
BPoly laplacian(const BPoly& p);

/// Product of two polynomials on the same triangle.
BPoly multiply(const BPoly& a, const BPoly& b);

/// Raise the degree by one without changing the polynomial.
BPoly elevate(const BPoly& p);
BPoly elevate_to(const BPoly& p, int degree);

/// The unique degree-k polynomial taking `values` at the degree-k domain points.
BPoly from_point_values(int k, std::span<const double> values, const TriGeom& geom);

/// Interpolates `f(x, y)` at the degree-k domain points.
template <class F>
BPoly from_function(int k, const TriGeom& geom, F&& f) {
  const auto pts = domain_points(k);
  std::vector<double> vals(pts.size());
  for (std::size_t a = 0; a < pts.size(); ++a) {
    const Point2 x = geom.point(pts[a]);
    vals[a] = f(x.x, x.y);
  }
  return from_point_values(k, vals, geom);
}

/// Quadrature on a triangle; weights sum to one, so integrals are
/// area * sum w_q g(x_q).
struct QuadRule {
  std::vector<Bary> points;
  std::vector<double> weights;
  int exactness_degree = 0;
};

/// Rule exact for polynomials of total degree <= required_degree (0..16).
/// Rules are built once and cached.
const QuadRule& make_quad_rule(int required_degree);

/// Nodes and weights of the n-point Gauss-Legendre rule on [0, 1].
void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Bernstein basis values B_alpha(q) (rows = points, columns = storage order)
/// and their lambda-derivatives at the points of make_quad_rule(rule_degree).
struct BernsteinTable {
  Eigen::MatrixXd value;
  std::array<Eigen::MatrixXd, 3> dlambda;
};
const BernsteinTable& bernstein_table(int k, int rule_degree);

/// Values of all degree-k Bernstein polynomials at one point.
std::vector<double> bernstein_values(int k, const Bary& b);

template <class F>
double integrate(const TriGeom& geom, const QuadRule& rule, F&& g) {
  double s = 0.0;
  for (std::size_t q = 0; q < rule.points.size(); ++q) s += rule.weights[q] * g(rule.points[q]);
  return geom.area() * s;
}

}  // namespace igfem
