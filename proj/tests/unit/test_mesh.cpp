#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include <Eigen/Dense>

#include "igfem/mesh.hpp"
#include "igfem/poly.hpp"

using namespace igfem;

namespace {

struct Counts {
  int n, vertices, triangles, edges, boundary_edges;
};

// Closed-form counts of an n x n criss-cross grid.
Counts expected_counts(int level) {
  const int n = 1 << (level - 1);
  const int v = (n + 1) * (n + 1) + n * n;
  const int t = 4 * n * n;
  // Grid lines contribute 2n(n+1) edges, the diagonals 4n^2.
  const int e = 2 * n * (n + 1) + 4 * n * n;
  return {n, v, t, e, 4 * n};
}

}  // namespace

TEST(Mesh, LevelOneEnumeration) {
  const Mesh m = build_crisscross_mesh(1);
  EXPECT_EQ(m.vertices().size(), 5u);
  EXPECT_EQ(m.triangles().size(), 4u);
  EXPECT_EQ(m.edges().size(), 8u);
  EXPECT_EQ(m.boundary_edge_count(), 4);
  EXPECT_DOUBLE_EQ(m.h(), 1.0);
}

TEST(Mesh, LevelTwoEnumeration) {
  const Mesh m = build_crisscross_mesh(2);
  EXPECT_EQ(m.vertices().size(), 13u);
  EXPECT_EQ(m.triangles().size(), 16u);
  EXPECT_EQ(m.edges().size(), 28u);
  EXPECT_EQ(static_cast<int>(m.edges().size()) - m.boundary_edge_count(), 20);
  EXPECT_DOUBLE_EQ(m.h(), 0.5);
}

TEST(Mesh, CountsMatchFormulas) {
  for (int level = 1; level <= 6; ++level) {
    const Mesh m = build_crisscross_mesh(level);
    const Counts c = expected_counts(level);
    EXPECT_EQ(m.n(), c.n);
    EXPECT_EQ(static_cast<int>(m.vertices().size()), c.vertices);
    EXPECT_EQ(static_cast<int>(m.triangles().size()), c.triangles);
    EXPECT_EQ(static_cast<int>(m.edges().size()), c.edges);
    EXPECT_EQ(m.boundary_edge_count(), c.boundary_edges);
    EXPECT_EQ(static_cast<int>(m.macro_squares().size()), c.n * c.n);
    const int V = static_cast<int>(m.vertices().size());
    const int E = static_cast<int>(m.edges().size());
    const int T = static_cast<int>(m.triangles().size());
    EXPECT_EQ(V - E + T, 1) << "Euler characteristic at level " << level;
  }
  EXPECT_EQ(build_crisscross_mesh(3).vertices().size(), 41u);
  EXPECT_EQ(build_crisscross_mesh(3).triangles().size(), 64u);
}

TEST(Mesh, TopologyInvariants) {
  for (double perturb : {0.0, 0.2}) {
    const Mesh m = build_crisscross_mesh(4, perturb);
    std::set<int> centers;
    for (const auto& sq : m.macro_squares()) centers.insert(sq.center);
    for (std::size_t t = 0; t < m.triangles().size(); ++t) {
      EXPECT_GT(m.signed_area(static_cast<int>(t)), 0.0);
      int center_count = 0;
      for (int v : m.triangles()[t].v) center_count += centers.count(v) ? 1 : 0;
      EXPECT_EQ(center_count, 1);
      const auto& tri = m.triangles()[t];
      for (int i = 0; i < 3; ++i) {
        const auto& e = m.edges()[tri.edge[i]];
        const int a = std::min(tri.v[i], tri.v[(i + 1) % 3]);
        const int b = std::max(tri.v[i], tri.v[(i + 1) % 3]);
        EXPECT_EQ(e.v[0], a);
        EXPECT_EQ(e.v[1], b);
      }
    }
    for (const auto& e : m.edges()) {
      if (e.boundary) {
        EXPECT_GE(e.tri[0], 0);
        EXPECT_EQ(e.tri[1], -1);
      } else {
        EXPECT_GE(e.tri[0], 0);
        EXPECT_GE(e.tri[1], 0);
      }
    }
  }
}

TEST(Mesh, BoundaryFlagsFollowGeometry) {
  const Mesh m = build_crisscross_mesh(3);
  for (const auto& v : m.vertices()) {
    const bool on = v.p.x == 0.0 || v.p.x == 1.0 || v.p.y == 0.0 || v.p.y == 1.0;
    EXPECT_EQ(v.boundary, on);
  }
}

TEST(Mesh, PerturbationBoundedAndDeterministic) {
  const Mesh ref = build_crisscross_mesh(3);
  const Mesh a = build_crisscross_mesh(3, 0.25, 7);
  const Mesh b = build_crisscross_mesh(3, 0.25, 7);
  EXPECT_TRUE(a.perturbed());
  double moved = 0.0;
  for (std::size_t i = 0; i < ref.vertices().size(); ++i) {
    const double d = distance(ref.vertices()[i].p, a.vertices()[i].p);
    EXPECT_LE(d, 0.25 * ref.h() + 1e-15);
    if (ref.vertices()[i].boundary) EXPECT_EQ(d, 0.0);
    EXPECT_EQ(a.vertices()[i].p, b.vertices()[i].p);
    moved = std::max(moved, d);
  }
  EXPECT_GT(moved, 0.0);
}

TEST(Mesh, RejectsBadArguments) {
  EXPECT_THROW(build_crisscross_mesh(0), MeshError);
  EXPECT_THROW(build_crisscross_mesh(2, 0.3), MeshError);
  EXPECT_THROW(build_crisscross_mesh(2, -0.1), MeshError);
}

TEST(Mesh, WriteFormat) {
  const Mesh m = build_crisscross_mesh(1);
  std::ostringstream os;
  m.write(os);
  std::istringstream is(os.str());
  int v = 0, e = 0, t = 0;
  is >> v >> e >> t;
  EXPECT_EQ(v, 5);
  EXPECT_EQ(e, 8);
  EXPECT_EQ(t, 4);
  int lines = 0;
  std::string line;
  std::getline(is, line);
  while (std::getline(is, line)) ++lines;
  EXPECT_EQ(lines, 9);
}

TEST(EdgeGauss, UnitInterval) {
  const auto [a, b] = edge_gauss_points({0, 0}, {1, 0});
  EXPECT_NEAR(a.x, 0.2113248654, 1e-10);
  EXPECT_NEAR(b.x, 0.7886751346, 1e-10);
  EXPECT_EQ(a.y, 0.0);
  EXPECT_EQ(b.y, 0.0);
}

TEST(EdgeGauss, ScaledVertical) {
  const auto [a, b] = edge_gauss_points({0, 0}, {0, 2});
  EXPECT_NEAR(a.y, 0.4226497308, 1e-10);
  EXPECT_NEAR(b.y, 1.5773502692, 1e-10);
  EXPECT_EQ(a.x, 0.0);
}

TEST(EdgeGauss, SymmetricAboutMidpointAndRejectsDegenerate) {
  const Point2 p{0.3, -1.2}, q{2.5, 0.7};
  const auto [a, b] = edge_gauss_points(p, q);
  EXPECT_NEAR(0.5 * (a.x + b.x), 0.5 * (p.x + q.x), 1e-15);
  EXPECT_NEAR(0.5 * (a.y + b.y), 0.5 * (p.y + q.y), 1e-15);
  EXPECT_THROW(edge_gauss_points(p, p), MeshError);
}

TEST(EdgeGauss, SixPointsLieOnAConic) {
  const Mesh m = build_crisscross_mesh(2, 0.2, 99);
  for (std::size_t t = 0; t < m.triangles().size(); ++t) {
    const auto pts = m.triangle_points(static_cast<int>(t));
    std::vector<Point2> g;
    for (int e = 0; e < 3; ++e) {
      const auto [a, b] = edge_gauss_points(pts[e], pts[(e + 1) % 3]);
      g.push_back(a);
      g.push_back(b);
    }
    // Conic through the first five points = null vector of the 5x6 system.
    auto row = [](Point2 p) {
      Eigen::Matrix<double, 1, 6> r;
      r << p.x * p.x, p.x * p.y, p.y * p.y, p.x, p.y, 1.0;
      return r;
    };
    Eigen::Matrix<double, 5, 6> M;
    for (int i = 0; i < 5; ++i) M.row(i) = row(g[i]);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
    const Eigen::VectorXd conic = svd.matrixV().col(5);
    EXPECT_LT(std::abs(row(g[5]).dot(conic)), 1e-12);
  }
}
