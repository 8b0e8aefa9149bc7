#include "igfem/problems.hpp"

#include <cmath>
#include <stdexcept>

namespace igfem {

namespace {

std::vector<Problem> make_registry() {
  std::vector<Problem> r;
  const double pi = M_PI;
  r.push_back({"sine", [pi](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); },
               [pi](double x, double y) {
                 return Eigen::Vector2d(pi * std::cos(pi * x) * std::sin(pi * y), pi * std::sin(pi * x) * std::cos(pi * y));
               },
               [pi](double x, double y) { return 2.0 * pi * pi * std::sin(pi * x) * std::sin(pi * y); }});
  r.push_back({"bubble", [](double x, double y) { return x * (1 - x) * y * (1 - y); },
               [](double x, double y) { return Eigen::Vector2d((1 - 2 * x) * y * (1 - y), x * (1 - x) * (1 - 2 * y)); },
               [](double x, double y) { return 2.0 * (x * (1 - x) + y * (1 - y)); }});
  return r;
}

const std::vector<Problem>& registry() {
  static const std::vector<Problem> r = make_registry();
  return r;
}

}  // namespace

const Problem& find_problem(std::string_view name) {
  for (const auto& p : registry())
    if (p.name == name) return p;
  throw std::invalid_argument("unknown problem '" + std::string(name) + "'");
}

std::vector<std::string> problem_names() {
  std::vector<std::string> n;
  for (const auto& p : registry()) n.push_back(p.name);
  return n;
}

}  // namespace igfem
