#include <array>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>

#include "igfem/poly.hpp"

namespace igfem {

void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre_01: n must be positive");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    nodes[n - 1 - i] = 0.5 * (1.0 + x);
    weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
}

namespace {

constexpr int kMaxRuleDegree = 16;

// Collapsed (Duffy) product of two Gauss-Legendre rules. The Jacobian adds one
// degree in the collapsed direction, so n points per direction integrate total
// degree 2n - 2 exactly.
QuadRule collapsed_rule(int degree) {
  const int n = (degree + 3) / 2;
  std::vector<double> x, w;
  gauss_legendre_01(n, x, w);
  QuadRule r;
  r.exactness_degree = 2 * n - 2;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double l1 = x[i];
      const double l2 = x[j] * (1.0 - x[i]);
      r.points.push_back({1.0 - l1 - l2, l1, l2});
      r.weights.push_back(2.0 * w[i] * w[j] * (1.0 - x[i]));
    }
  return r;
}

}  // namespace

const QuadRule& make_quad_rule(int required_degree) {
  if (required_degree < 0 || required_degree > kMaxRuleDegree)
    throw std::invalid_argument("make_quad_rule: unsupported degree " + std::to_string(required_degree) +
                                " (supported 0.." + std::to_string(kMaxRuleDegree) + ")");
  static std::array<QuadRule, kMaxRuleDegree + 1> cache;
  static std::array<std::once_flag, kMaxRuleDegree + 1> once;
  std::call_once(once[required_degree], [required_degree] { cache[required_degree] = collapsed_rule(required_degree); });
  return cache[required_degree];
}

}  // namespace igfem
