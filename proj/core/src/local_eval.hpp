#pragma once

#include <Eigen/Dense>

#include "igfem/elements.hpp"

namespace igfem::detail {

/// Values and Cartesian gradients of every basis function of an element on
/// one piece, at the points of make_quad_rule(rule_degree). Rows are points,
/// columns local basis functions.
struct PieceValues {
  Eigen::MatrixXd value;
  Eigen::MatrixXd gx;
  Eigen::MatrixXd gy;
};

inline PieceValues piece_values(const LocalElement& el, int piece, int rule_degree, bool with_values) {
  const int nb = static_cast<int>(el.basis.size());
  const int k = el.degree;
  const BernsteinTable& t = bernstein_table(k, rule_degree);
  const auto& gl = el.geoms[piece].grad_lambda();
  Eigen::MatrixXd C(bernstein_dim(k), nb);
  for (int m = 0; m < nb; ++m) {
    const BPoly& p = el.basis[m].pieces[piece];
    const BPoly q = p.degree() == k ? p : elevate_to(p, k);
    C.col(m) = Eigen::Map<const Eigen::VectorXd>(q.coeffs().data(), bernstein_dim(k));
  }
  PieceValues v;
  if (with_values) v.value = t.value * C;
  const Eigen::MatrixXd d0 = t.dlambda[0] * C;
  const Eigen::MatrixXd d1 = t.dlambda[1] * C;
  const Eigen::MatrixXd d2 = t.dlambda[2] * C;
  v.gx = gl[0].x() * d0 + gl[1].x() * d1 + gl[2].x() * d2;
  v.gy = gl[0].y() * d0 + gl[1].y() * d1 + gl[2].y() * d2;
  return v;
}

}  // namespace igfem::detail
