#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "igfem/poly.hpp"

using namespace igfem;

namespace {

const TriGeom kRef({Point2{0, 0}, Point2{1, 0}, Point2{0, 1}});

TriGeom random_triangle(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  while (true) {
    std::array<Point2, 3> p{Point2{u(rng), u(rng)}, Point2{u(rng), u(rng)}, Point2{u(rng), u(rng)}};
    const double twice = cross(p[1] - p[0], p[2] - p[0]);
    if (std::abs(twice) < 0.2) continue;
    if (twice < 0) std::swap(p[1], p[2]);
    return TriGeom(p);
  }
}

BPoly random_poly(int k, const TriGeom& g, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> c(bernstein_dim(k));
  for (double& v : c) v = u(rng);
  return BPoly(k, c, g);
}

Bary random_bary(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  double a = u(rng), b = u(rng), c = u(rng);
  const double s = a + b + c;
  return {a / s, b / s, c / s};
}

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

}  // namespace

TEST(TriGeom, BarycentricGradientsSumToZero) {
  std::mt19937 rng(1);
  for (int i = 0; i < 10; ++i) {
    const TriGeom g = random_triangle(rng);
    const auto& gl = g.grad_lambda();
    EXPECT_NEAR((gl[0] + gl[1] + gl[2]).norm(), 0.0, 1e-12);
    for (int v = 0; v < 3; ++v) {
      const Bary b = g.barycentric(g.vertices()[v]);
      for (int j = 0; j < 3; ++j) EXPECT_NEAR(b[j], v == j ? 1.0 : 0.0, 1e-12);
    }
  }
  EXPECT_THROW(TriGeom({Point2{0, 0}, Point2{1, 1}, Point2{2, 2}}), GeometryError);
  EXPECT_THROW(TriGeom({Point2{0, 0}, Point2{0, 1}, Point2{1, 0}}), GeometryError);
}

TEST(MultiIndex, LexicographicOrder) {
  const auto& mi = multi_indices(2);
  ASSERT_EQ(mi.size(), 6u);
  const std::vector<std::array<int, 3>> expected{{2, 0, 0}, {1, 1, 0}, {1, 0, 1}, {0, 2, 0}, {0, 1, 1}, {0, 0, 2}};
  for (std::size_t a = 0; a < mi.size(); ++a) {
    EXPECT_EQ(mi[a], expected[a]);
    EXPECT_EQ(multi_index_position(2, mi[a][0], mi[a][1]), static_cast<int>(a));
  }
}

TEST(BPoly, PartitionOfUnity) {
  std::mt19937 rng(2);
  for (int k = 0; k <= 8; ++k) {
    const BPoly one = BPoly::constant(k, 1.0, kRef);
    for (int i = 0; i < 5; ++i) EXPECT_NEAR(eval(one, random_bary(rng)), 1.0, 1e-14);
  }
}

TEST(BPoly, CubicBubbleAtBarycenter) {
  BPoly b = BPoly::zero(3, kRef);
  b.coeffs()[multi_index_position(3, 1, 1)] = 4.5;
  EXPECT_NEAR(eval(b, Bary{1.0 / 3, 1.0 / 3, 1.0 / 3}), 1.0, 1e-15);
  EXPECT_NEAR(eval(laplacian(b), Bary{1.0 / 3, 1.0 / 3, 1.0 / 3}), -36.0, 1e-12);
}

TEST(BPoly, GradientOfLambda) {
  // Storage order is (lambda_0, lambda_1, lambda_2); lambda_1 = x on the reference triangle.
  const BPoly l1(1, {0.0, 1.0, 0.0}, kRef);
  const Eigen::Vector2d g = grad(l1, Bary{0.2, 0.3, 0.5});
  EXPECT_NEAR(g.x(), 1.0, 1e-15);
  EXPECT_NEAR(g.y(), 0.0, 1e-15);
}

TEST(BPoly, LaplacianOfFsQuadratic) {
  // 2 - 3 sum(lambda^2): B-coefficients -1 at vertices, 2 on edges.
  const BPoly q(2, {-1, 2, 2, -1, 2, -1}, kRef);
  EXPECT_NEAR(eval(q, Bary{1.0 / 3, 1.0 / 3, 1.0 / 3}), 1.0, 1e-15);
  const BPoly lap = laplacian(q);
  EXPECT_EQ(lap.degree(), 0);
  EXPECT_NEAR(lap.coeffs()[0], -24.0, 1e-12);
  EXPECT_THROW(laplacian(BPoly::lambda(0, kRef)), std::invalid_argument);
}

TEST(BPoly, LinearHasZeroLaplacian) {
  const BPoly p = elevate_to(BPoly(1, {0.3, -1.2, 2.0}, kRef), 3);
  const BPoly lap = laplacian(p);
  for (double c : lap.coeffs()) EXPECT_NEAR(c, 0.0, 1e-12);
}

TEST(BPoly, FromPointValues) {
  const auto pts = domain_points(2);
  std::vector<double> ones(pts.size(), 1.0);
  const BPoly one = from_point_values(2, ones, kRef);
  for (double c : one.coeffs()) EXPECT_NEAR(c, 1.0, 1e-13);
  std::vector<double> sq;
  for (const auto& b : pts) sq.push_back(b[0] * b[0]);
  const BPoly p = from_point_values(2, sq, kRef);
  const std::vector<double> expected{1, 0, 0, 0, 0, 0};
  for (int a = 0; a < 6; ++a) EXPECT_NEAR(p.coeffs()[a], expected[a], 1e-13);
  std::vector<double> wrong(5, 0.0);
  EXPECT_THROW(from_point_values(2, wrong, kRef), std::invalid_argument);
}

TEST(BPoly, FromPointValuesRoundTrip) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 1; k <= 8; ++k) {
    const TriGeom g = random_triangle(rng);
    const auto pts = domain_points(k);
    std::vector<double> v(pts.size());
    for (double& x : v) x = u(rng);
    const BPoly p = from_point_values(k, v, g);
    for (std::size_t a = 0; a < pts.size(); ++a) EXPECT_NEAR(eval(p, pts[a]), v[a], 1e-12);
  }
}

TEST(BPoly, GradientMatchesFiniteDifferences) {
  std::mt19937 rng(4);
  for (int k = 1; k <= 8; ++k) {
    const TriGeom g = random_triangle(rng);
    const BPoly p = random_poly(k, g, rng);
    const Point2 x = g.point(random_bary(rng));
    const double h = 1e-6;
    const double dx = (eval(p, Point2{x.x + h, x.y}) - eval(p, Point2{x.x - h, x.y})) / (2 * h);
    const double dy = (eval(p, Point2{x.x, x.y + h}) - eval(p, Point2{x.x, x.y - h})) / (2 * h);
    const Eigen::Vector2d gr = grad(p, g.barycentric(x));
    const double scale = std::max(1.0, gr.norm());
    EXPECT_NEAR(gr.x(), dx, 1e-6 * scale) << "k=" << k;
    EXPECT_NEAR(gr.y(), dy, 1e-6 * scale) << "k=" << k;
  }
}

TEST(BPoly, LaplacianMatchesFiniteDifferences) {
  std::mt19937 rng(5);
  for (int k = 2; k <= 8; ++k) {
    const TriGeom g = random_triangle(rng);
    const BPoly p = random_poly(k, g, rng);
    const Point2 x = g.point(random_bary(rng));
    const double h = 1e-3;
    // Fourth-order central differences in each direction.
    auto second = [&](double dx, double dy) {
      auto f = [&](double s) { return eval(p, Point2{x.x + s * dx, x.y + s * dy}); };
      return (-f(2 * h) + 16 * f(h) - 30 * f(0) + 16 * f(-h) - f(-2 * h)) / (12 * h * h);
    };
    const double fd = second(1, 0) + second(0, 1);
    const double lap = eval(laplacian(p), g.barycentric(x));
    EXPECT_NEAR(lap, fd, 1e-5 * std::max(1.0, std::abs(lap))) << "k=" << k;
  }
}

TEST(BPoly, MultiplyAndElevateAgreeWithPointwise) {
  std::mt19937 rng(6);
  const TriGeom g = random_triangle(rng);
  const BPoly a = random_poly(3, g, rng);
  const BPoly b = random_poly(4, g, rng);
  const BPoly ab = multiply(a, b);
  const BPoly ae = elevate_to(a, 6);
  const BPoly sum = a + b;
  EXPECT_EQ(ab.degree(), 7);
  for (int i = 0; i < 10; ++i) {
    const Bary x = random_bary(rng);
    EXPECT_NEAR(eval(ab, x), eval(a, x) * eval(b, x), 1e-12);
    EXPECT_NEAR(eval(ae, x), eval(a, x), 1e-12);
    EXPECT_NEAR(eval(sum, x), eval(a, x) + eval(b, x), 1e-12);
  }
}

TEST(BPoly, AffineInvarianceOfValues) {
  std::mt19937 rng(7);
  const TriGeom g1 = random_triangle(rng);
  const TriGeom g2 = random_triangle(rng);
  std::vector<double> c(bernstein_dim(5));
  for (double& v : c) v = std::uniform_real_distribution<double>(-1, 1)(rng);
  const BPoly p1(5, c, g1), p2(5, c, g2);
  for (int i = 0; i < 5; ++i) {
    const Bary x = random_bary(rng);
    EXPECT_EQ(eval(p1, x), eval(p2, x));
  }
}

TEST(Quadrature, ReferenceIntegrals) {
  const QuadRule& r = make_quad_rule(2);
  EXPECT_NEAR(integrate(kRef, r, [](const Bary&) { return 1.0; }), 0.5, 1e-15);
  EXPECT_NEAR(integrate(kRef, r, [](const Bary& b) { return b[1]; }), 1.0 / 6.0, 1e-15);
  EXPECT_THROW(make_quad_rule(17), std::invalid_argument);
  EXPECT_THROW(make_quad_rule(-1), std::invalid_argument);
}

TEST(Quadrature, WeightsSumToOneAndDegreeIsMet) {
  for (int d = 0; d <= 16; ++d) {
    const QuadRule& r = make_quad_rule(d);
    double s = 0.0;
    for (double w : r.weights) s += w;
    EXPECT_NEAR(s, 1.0, 1e-14);
    EXPECT_GE(r.exactness_degree, d);
  }
}

TEST(Quadrature, MonomialsOnReferenceTriangle) {
  // int_T x^a y^b = a! b! / (a + b + 2)!
  for (int d = 0; d <= 16; ++d) {
    const QuadRule& r = make_quad_rule(d);
    for (int a = 0; a <= d; ++a)
      for (int b = 0; a + b <= d; ++b) {
        const double exact = factorial(a) * factorial(b) / factorial(a + b + 2);
        const double q = integrate(kRef, r, [&](const Bary& l) { return std::pow(l[1], a) * std::pow(l[2], b); });
        EXPECT_NEAR(q, exact, 1e-12 * exact) << "rule " << d << " x^" << a << " y^" << b;
      }
  }
}

TEST(Quadrature, BernsteinIntegrals) {
  std::mt19937 rng(8);
  const TriGeom g = random_triangle(rng);
  for (int k = 0; k <= 16; ++k) {
    const QuadRule& r = make_quad_rule(k);
    const double exact = g.area() * 2.0 / ((k + 1) * (k + 2));
    for (std::size_t a = 0; a < multi_indices(k).size(); ++a) {
      BPoly p = BPoly::zero(k, g);
      p.coeffs()[a] = 1.0;
      const double q = integrate(g, r, [&](const Bary& x) { return eval(p, x); });
      EXPECT_NEAR(q, exact, 1e-12 * exact) << "k=" << k << " alpha " << a;
    }
  }
}

TEST(Quadrature, BernsteinTableMatchesEvaluation) {
  const QuadRule& r = make_quad_rule(6);
  const BernsteinTable& t = bernstein_table(4, 6);
  std::mt19937 rng(9);
  const BPoly p = random_poly(4, kRef, rng);
  const Eigen::Map<const Eigen::VectorXd> c(p.coeffs().data(), bernstein_dim(4));
  const Eigen::VectorXd v = t.value * c;
  for (std::size_t q = 0; q < r.points.size(); ++q) EXPECT_NEAR(v[q], eval(p, r.points[q]), 1e-13);
}
