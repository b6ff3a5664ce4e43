#pragma once

#include <vector>

#include "hpdg/types.hpp"

namespace hpdg {

/// Highest exactness degree served by triangle_rule / edge_rule.
inline constexpr int kMaxQuadratureDegree = 160;

/// Points and weights on the reference triangle conv((0,0),(1,0),(0,1))
/// (weights sum to 1/2) or on the segment [0,1] (points stored in x, weights
/// sum to 1).
struct QuadratureRule {
  std::vector<Vec2> points;
  std::vector<double> weights;
  int exactness = 0;

  int size() const { return static_cast<int>(weights.size()); }
};

/// Gauss-Legendre nodes and weights on [0,1].
const QuadratureRule &gauss_legendre(int num_points);

/// Rule on [0,1], exact to `exactness`, with ceil((exactness + 1) / 2) points.
/// Throws UnsupportedDegree.
const QuadratureRule &edge_rule(int exactness);

/// Collapsed (Duffy) product rule on the reference triangle, exact to
/// `exactness`. All points lie in the open triangle. Throws UnsupportedDegree.
const QuadratureRule &triangle_rule(int exactness);

} // namespace hpdg
