#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "igfem/assembly.hpp"

namespace igfem {

/// Manufactured Poisson problem on the unit square: -Laplacian(u) = f, u = 0 on the boundary.
struct Problem {
  std::string name;
  ScalarFn u;
  std::function<Eigen::Vector2d(double, double)> grad_u;
  ScalarFn f;
};

/// Built-in problems: "sine" (sin(pi x) sin(pi y)) and "bubble" (x(1-x)y(1-y)).
const Problem& find_problem(std::string_view name);
std::vector<std::string> problem_names();

}  // namespace igfem
