#include "igfem/poly.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>

namespace igfem {

TriGeom::TriGeom(const std::array<Point2, 3>& v) : v_(v) {
  const double twice = cross(v[1] - v[0], v[2] - v[0]);
  const double scale = std::max({distance(v[0], v[1]), distance(v[1], v[2]), distance(v[2], v[0])});
  if (!(twice > 1e-14 * scale * scale))
    throw GeometryError("degenerate or clockwise triangle (twice area " + std::to_string(twice) + ")");
  area_ = 0.5 * twice;
  for (int i = 0; i < 3; ++i) {
    const Point2 pj = v[(i + 1) % 3];
    const Point2 pk = v[(i + 2) % 3];
    grad_[i] = Eigen::Vector2d(pj.y - pk.y, pk.x - pj.x) / twice;
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) gram_(i, j) = grad_[i].dot(grad_[j]);
}

Point2 TriGeom::point(const Bary& b) const {
  return {b[0] * v_[0].x + b[1] * v_[1].x + b[2] * v_[2].x, b[0] * v_[0].y + b[1] * v_[1].y + b[2] * v_[2].y};
}

Bary TriGeom::barycentric(Point2 p) const {
  Bary b{};
  for (int i = 0; i < 3; ++i) {
    const Point2 pj = v_[(i + 1) % 3];
    b[i] = grad_[i].x() * (p.x - pj.x) + grad_[i].y() * (p.y - pj.y);
  }
  return b;
}

Point2 TriGeom::barycenter() const { return point({1.0 / 3, 1.0 / 3, 1.0 / 3}); }

double TriGeom::diameter() const {
  return std::max({distance(v_[0], v_[1]), distance(v_[1], v_[2]), distance(v_[2], v_[0])});
}

namespace {

void check_degree(int k) {
  if (k < 0 || k > kMaxPolyDegree)
    throw std::invalid_argument("polynomial degree " + std::to_string(k) + " outside [0, " +
                                std::to_string(kMaxPolyDegree) + "]");
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double multinomial(int k, const std::array<int, 3>& a) {
  return factorial(k) / (factorial(a[0]) * factorial(a[1]) * factorial(a[2]));
}

struct IndexTables {
  std::array<std::vector<std::array<int, 3>>, kMaxPolyDegree + 1> idx;
  IndexTables() {
    for (int k = 0; k <= kMaxPolyDegree; ++k)
      for (int i = k; i >= 0; --i)
        for (int j = k - i; j >= 0; --j) idx[k].push_back({i, j, k - i - j});
  }
};

const IndexTables& index_tables() {
  static const IndexTables t;
  return t;
}

// Inverse of the Bernstein collocation matrix at the domain points. It does
// not depend on the triangle, so one factorization per degree suffices.
const Eigen::MatrixXd& collocation_inverse(int k) {
  static std::array<Eigen::MatrixXd, kMaxPolyDegree + 1> cache;
  static std::array<std::once_flag, kMaxPolyDegree + 1> once;
  std::call_once(once[k], [k] {
    const int n = bernstein_dim(k);
    const auto& mi = multi_indices(k);
    const auto pts = domain_points(k);
    Eigen::MatrixXd m(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double v = multinomial(k, mi[b]);
        for (int d = 0; d < 3; ++d) v *= std::pow(pts[a][d], mi[b][d]);
        m(a, b) = v;
      }
    cache[k] = m.fullPivLu().inverse();
  });
  return cache[k];
}

// One de Casteljau step: degree m -> m - 1.
void casteljau_step(int m, std::vector<double>& c, const Bary& b) {
  const auto& lower = multi_indices(m - 1);
  std::vector<double> out(lower.size());
  for (std::size_t a = 0; a < lower.size(); ++a) {
    const auto& al = lower[a];
    out[a] = b[0] * c[multi_index_position(m, al[0] + 1, al[1])] +
             b[1] * c[multi_index_position(m, al[0], al[1] + 1)] + b[2] * c[multi_index_position(m, al[0], al[1])];
  }
  c = std::move(out);
}

}  // namespace

const std::vector<std::array<int, 3>>& multi_indices(int k) {
  check_degree(k);
  return index_tables().idx[k];
}

std::vector<Bary> domain_points(int k) {
  const auto& mi = multi_indices(k);
  std::vector<Bary> pts;
  pts.reserve(mi.size());
  if (k == 0) {
    pts.push_back({1.0 / 3, 1.0 / 3, 1.0 / 3});
    return pts;
  }
  for (const auto& a : mi) pts.push_back({double(a[0]) / k, double(a[1]) / k, double(a[2]) / k});
  return pts;
}

BPoly::BPoly(int degree, std::vector<double> coeffs, const TriGeom& geom)
    : degree_(degree), c_(std::move(coeffs)), geom_(geom) {
  check_degree(degree);
  if (c_.size() != static_cast<std::size_t>(bernstein_dim(degree)))
    throw std::invalid_argument("BPoly: expected " + std::to_string(bernstein_dim(degree)) + " coefficients, got " +
                                std::to_string(c_.size()));
}

BPoly BPoly::zero(int degree, const TriGeom& geom) {
  check_degree(degree);
  return BPoly(degree, std::vector<double>(bernstein_dim(degree), 0.0), geom);
}

BPoly BPoly::constant(int degree, double value, const TriGeom& geom) {
  check_degree(degree);
  return BPoly(degree, std::vector<double>(bernstein_dim(degree), value), geom);
}

BPoly BPoly::lambda(int i, const TriGeom& geom) {
  std::vector<double> c(3, 0.0);
  c[i] = 1.0;
  return BPoly(1, std::move(c), geom);
}

BPoly& BPoly::operator+=(const BPoly& o) {
  if (o.degree_ > degree_) *this = elevate_to(*this, o.degree_);
  const BPoly rhs = o.degree_ < degree_ ? elevate_to(o, degree_) : o;
  for (std::size_t a = 0; a < c_.size(); ++a) c_[a] += rhs.c_[a];
  return *this;
}

BPoly& BPoly::operator-=(const BPoly& o) {
  BPoly neg = o;
  neg *= -1.0;
  return *this += neg;
}

BPoly& BPoly::operator*=(double s) {
  for (auto& v : c_) v *= s;
  return *this;
}

double eval(const BPoly& p, const Bary& b) {
  std::vector<double> c = p.coeffs();
  for (int m = p.degree(); m > 0; --m) casteljau_step(m, c, b);
  return c[0];
}

double eval(const BPoly& p, Point2 x) { return eval(p, p.geom().barycentric(x)); }

Eigen::Vector2d grad(const BPoly& p, const Bary& b) {
  const int k = p.degree();
  if (k == 0) return Eigen::Vector2d::Zero();
  std::vector<double> c = p.coeffs();
  for (int m = k; m > 1; --m) casteljau_step(m, c, b);
  // c now holds the linear net; d p / d lambda_i = k * c_i.
  const auto& g = p.geom().grad_lambda();
  return k * (c[0] * g[0] + c[1] * g[1] + c[2] * g[2]);
}

BPoly laplacian(const BPoly& p) {
  const int k = p.degree();
  if (k < 2) throw std::invalid_argument("laplacian: degree must be >= 2");
  const auto& gram = p.geom().lambda_gram();
  const auto& lower = multi_indices(k - 2);
  std::vector<double> d(lower.size(), 0.0);
  const auto& c = p.coeffs();
  for (std::size_t a = 0; a < lower.size(); ++a) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        auto be = lower[a];
        ++be[i];
        ++be[j];
        s += gram(i, j) * c[multi_index_position(k, be[0], be[1])];
      }
    d[a] = k * (k - 1) * s;
  }
  return BPoly(k - 2, std::move(d), p.geom());
}

BPoly multiply(const BPoly& a, const BPoly& b) {
  const int m = a.degree();
  const int n = b.degree();
  check_degree(m + n);
  const auto& ia = multi_indices(m);
  const auto& ib = multi_indices(n);
  std::vector<double> c(bernstein_dim(m + n), 0.0);
  for (std::size_t p = 0; p < ia.size(); ++p)
    for (std::size_t q = 0; q < ib.size(); ++q) {
      const std::array<int, 3> s{ia[p][0] + ib[q][0], ia[p][1] + ib[q][1], ia[p][2] + ib[q][2]};
      const double w = multinomial(m, ia[p]) * multinomial(n, ib[q]) / multinomial(m + n, s);
      c[multi_index_position(m + n, s[0], s[1])] += w * a.coeffs()[p] * b.coeffs()[q];
    }
  return BPoly(m + n, std::move(c), a.geom());
}

BPoly elevate(const BPoly& p) {
  const int k = p.degree();
  const auto& hi = multi_indices(k + 1);
  std::vector<double> c(hi.size(), 0.0);
  for (std::size_t a = 0; a < hi.size(); ++a) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i) {
      if (hi[a][i] == 0) continue;
      auto lo = hi[a];
      --lo[i];
      s += hi[a][i] * p.coeffs()[multi_index_position(k, lo[0], lo[1])];
    }
    c[a] = s / (k + 1);
  }
  return BPoly(k + 1, std::move(c), p.geom());
}

BPoly elevate_to(const BPoly& p, int degree) {
  if (degree < p.degree()) throw std::invalid_argument("elevate_to: target degree below current degree");
  BPoly q = p;
  while (q.degree() < degree) q = elevate(q);
  return q;
}

BPoly from_point_values(int k, std::span<const double> values, const TriGeom& geom) {
  check_degree(k);
  if (values.size() != static_cast<std::size_t>(bernstein_dim(k)))
    throw std::invalid_argument("from_point_values: expected " + std::to_string(bernstein_dim(k)) +
                                " values, got " + std::to_string(values.size()));
  if (!(geom.area() > 0.0)) throw GeometryError("from_point_values: degenerate triangle");
  const Eigen::Map<const Eigen::VectorXd> v(values.data(), static_cast<Eigen::Index>(values.size()));
  const Eigen::VectorXd c = collocation_inverse(k) * v;
  return BPoly(k, std::vector<double>(c.data(), c.data() + c.size()), geom);
}

std::vector<double> bernstein_values(int k, const Bary& b) {
  const auto& mi = multi_indices(k);
  std::vector<double> v(mi.size());
  for (std::size_t a = 0; a < mi.size(); ++a) {
    double x = multinomial(k, mi[a]);
    for (int d = 0; d < 3; ++d)
      for (int e = 0; e < mi[a][d]; ++e) x *= b[d];
    v[a] = x;
  }
  return v;
}

const BernsteinTable& bernstein_table(int k, int rule_degree) {
  check_degree(k);
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<BernsteinTable>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{k, rule_degree}];
  if (slot) return *slot;
  const QuadRule& rule = make_quad_rule(rule_degree);
  const int np = static_cast<int>(rule.points.size());
  const auto& mi = multi_indices(k);
  auto t = std::make_unique<BernsteinTable>();
  t->value.resize(np, bernstein_dim(k));
  for (auto& d : t->dlambda) d = Eigen::MatrixXd::Zero(np, bernstein_dim(k));
  for (int q = 0; q < np; ++q) {
    const auto v = bernstein_values(k, rule.points[q]);
    for (std::size_t a = 0; a < v.size(); ++a) t->value(q, a) = v[a];
    if (k == 0) continue;
    const auto lower = bernstein_values(k - 1, rule.points[q]);
    for (std::size_t a = 0; a < mi.size(); ++a)
      for (int i = 0; i < 3; ++i) {
        if (mi[a][i] == 0) continue;
        auto l = mi[a];
        --l[i];
        t->dlambda[i](q, a) = k * lower[multi_index_position(k - 1, l[0], l[1])];
      }
  }
  slot = std::move(t);
  return *slot;
}

}  // namespace igfem
