#include "igfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <random>
#include <string>

namespace igfem {

double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

std::array<Point2, 3> Mesh::triangle_points(int t) const {
  const auto& tr = triangles_.at(static_cast<std::size_t>(t));
  return {vertices_[tr.v[0]].p, vertices_[tr.v[1]].p, vertices_[tr.v[2]].p};
}

double Mesh::signed_area(int t) const {
  const auto p = triangle_points(t);
  return 0.5 * cross(p[1] - p[0], p[2] - p[0]);
}

int Mesh::find_edge(int a, int b) const {
  if (a > b) std::swap(a, b);
  auto it = std::lower_bound(edges_.begin(), edges_.end(), std::array<int, 2>{a, b},
                             [](const Edge& e, const std::array<int, 2>& key) { return e.v < key; });
  if (it != edges_.end() && it->v == std::array<int, 2>{a, b}) return static_cast<int>(it - edges_.begin());
  return -1;
}

int Mesh::boundary_edge_count() const {
  int c = 0;
  for (const auto& e : edges_) c += e.boundary ? 1 : 0;
  return c;
}

int Mesh::interior_vertex_count() const {
  int c = 0;
  for (const auto& v : vertices_) c += v.boundary ? 0 : 1;
  return c;
}

void Mesh::write(std::ostream& os) const {
  os << vertices_.size() << ' ' << edges_.size() << ' ' << triangles_.size() << '\n';
  os.precision(17);
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    os << "v " << vertices_[i].p.x << ' ' << vertices_[i].p.y << ' ' << (vertices_[i].boundary ? 1 : 0) << '\n';
  for (const auto& t : triangles_)
    os << "t " << t.v[0] << ' ' << t.v[1] << ' ' << t.v[2] << ' ' << t.macro << '\n';
}

Mesh build_crisscross_mesh(int level, double perturb, std::uint64_t seed) {
  if (level < 1 || level > 12) throw MeshError("mesh level must lie in [1, 12], got " + std::to_string(level));
  if (!(perturb >= 0.0 && perturb < 0.3))
    throw MeshError("perturbation must satisfy 0 <= perturb < 0.3, got " + std::to_string(perturb));

  Mesh m;
  m.level_ = level;
  m.n_ = 1 << (level - 1);
  const int n = m.n_;
  const double h = 1.0 / n;

  const auto corner_id = [n](int i, int j) { return j * (n + 1) + i; };
  const int center_base = (n + 1) * (n + 1);

  m.vertices_.reserve(static_cast<std::size_t>(center_base + n * n));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      m.vertices_.push_back({{i * h, j * h}, i == 0 || j == 0 || i == n || j == n});
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) m.vertices_.push_back({{(i + 0.5) * h, (j + 0.5) * h}, false});

  if (perturb > 0.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> radius(0.0, perturb * h);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    for (int j = 1; j < n; ++j)
      for (int i = 1; i < n; ++i) {
        const double r = radius(rng);
        const double a = angle(rng);
        auto& p = m.vertices_[corner_id(i, j)].p;
        p.x += r * std::cos(a);
        p.y += r * std::sin(a);
      }
    m.perturbed_ = true;
  }

  m.macros_.resize(static_cast<std::size_t>(n * n));
  m.triangles_.reserve(static_cast<std::size_t>(4 * n * n));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int q = j * n + i;
      auto& sq = m.macros_[q];
      sq.corner = {corner_id(i, j), corner_id(i + 1, j), corner_id(i + 1, j + 1), corner_id(i, j + 1)};
      sq.center = center_base + q;
      for (int s = 0; s < 4; ++s) {
        const Point2 a = m.vertices_[sq.corner[s]].p;
        const Point2 b = m.vertices_[sq.corner[(s + 1) % 4]].p;
        sq.side_mid[s] = 0.5 * (a + b);
        sq.tri[s] = static_cast<int>(m.triangles_.size());
        Triangle t;
        t.v = {sq.corner[s], sq.corner[(s + 1) % 4], sq.center};
        t.macro = q;
        m.triangles_.push_back(t);
      }
    }

  for (std::size_t t = 0; t < m.triangles_.size(); ++t)
    if (m.signed_area(static_cast<int>(t)) <= 0.0)
      throw MeshError("perturbation produced a non-positive triangle area at triangle " + std::to_string(t));

  std::map<std::array<int, 2>, std::array<int, 2>> edge_tris;
  for (std::size_t t = 0; t < m.triangles_.size(); ++t)
    for (int e = 0; e < 3; ++e) {
      int a = m.triangles_[t].v[e];
      int b = m.triangles_[t].v[(e + 1) % 3];
      if (a > b) std::swap(a, b);
      auto [it, inserted] = edge_tris.try_emplace({a, b}, std::array<int, 2>{static_cast<int>(t), -1});
      if (!inserted) it->second[1] = static_cast<int>(t);
    }
  m.edges_.reserve(edge_tris.size());
  for (const auto& [key, tris] : edge_tris) m.edges_.push_back({key, tris, tris[1] < 0});

  for (auto& t : m.triangles_)
    for (int e = 0; e < 3; ++e) t.edge[e] = m.find_edge(t.v[e], t.v[(e + 1) % 3]);
  for (auto& sq : m.macros_)
    for (int s = 0; s < 4; ++s) sq.side_edge[s] = m.find_edge(sq.corner[s], sq.corner[(s + 1) % 4]);

  return m;
}

std::pair<Point2, Point2> edge_gauss_points(Point2 a, Point2 b) {
  if (distance(a, b) == 0.0) throw MeshError("edge_gauss_points: zero-length edge");
  const double s = 1.0 / std::sqrt(3.0);
  const double t0 = 0.5 * (1.0 - s);
  const double t1 = 0.5 * (1.0 + s);
  return {a + t0 * (b - a), a + t1 * (b - a)};
}

}  // namespace igfem
