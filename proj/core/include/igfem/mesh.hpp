#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace igfem {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(const Point2&, const Point2&) = default;
};

inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
double distance(Point2 a, Point2 b);

/// Thrown for invalid mesh requests (bad level, flipped triangles, ...).
class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Vertex {
  Point2 p;
  bool boundary = false;
};

struct Edge {
  std::array<int, 2> v{};        // v[0] < v[1]
  std::array<int, 2> tri{-1, -1};  // tri[1] == -1 on the boundary
  bool boundary = false;
};

struct Triangle {
  std::array<int, 3> v{};     // counter-clockwise
  std::array<int, 3> edge{};  // edge[i] joins v[i] and v[(i+1)%3]
  int macro = -1;
};

/// One square of the criss-cross grid, split by both diagonals.
///
/// Corners run counter-clockwise from the lower-left one; sides follow the
/// same order (bottom, right, top, left). `tri[i]` is the sub-triangle that
/// has side i as an edge.
struct MacroSquare {
  std::array<int, 4> corner{};
  std::array<Point2, 4> side_mid{};
  std::array<int, 4> side_edge{};
  std::array<int, 4> tri{};
  int center = -1;
};

class Mesh {
 public:
  int level() const { return level_; }
  int n() const { return n_; }
  /// Side length of a macro square.
  double h() const { return 1.0 / n_; }
  bool perturbed() const { return perturbed_; }

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const std::vector<MacroSquare>& macro_squares() const { return macros_; }

  std::array<Point2, 3> triangle_points(int t) const;
  double signed_area(int t) const;

  /// Index of `edge` endpoint-pair lookup; returns -1 if (a, b) is not an edge.
  int find_edge(int a, int b) const;

  int boundary_edge_count() const;
  int interior_vertex_count() const;

  /// Plain-text dump: `vertices E T` header, `v x y flag` lines, `t i j k macro` lines.
  void write(std::ostream& os) const;

 private:
  friend Mesh build_crisscross_mesh(int level, double perturb, std::uint64_t seed);

  int level_ = 0;
  int n_ = 0;
  bool perturbed_ = false;
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<Triangle> triangles_;
  std::vector<MacroSquare> macros_;
};

/// Uniform criss-cross grid of the unit square with 2^(level-1) squares per
/// side. With perturb > 0 the interior square corners are moved randomly by
/// at most perturb * h.
Mesh build_crisscross_mesh(int level, double perturb = 0.0, std::uint64_t seed = 20240917);

/// The two Gauss-Legendre nodes of segment ab, ordered from a to b.
std::pair<Point2, Point2> edge_gauss_points(Point2 a, Point2 b);

}  // namespace igfem
