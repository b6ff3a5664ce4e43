#pragma once

#include <span>
#include <vector>

#include "hpdg/mesh.hpp"

namespace hpdg {

struct RefineResult {
  Mesh mesh;
  DegreeMap degrees;
  /// parent[t] is the index in the input mesh of the triangle that child t
  /// descends from (t itself if it was not split).
  std::vector<int> parent;
};

/// Largest-edge bisection of the marked triangles followed by closure.
///
/// Every marked triangle is bisected across its longest edge (ties go to the
/// edge with the smallest sorted vertex pair, which is the smallest global
/// edge index). Any triangle that then carries a hanging node on one of its
/// edges is bisected across its own longest edge, until the mesh is conforming
/// again. Children inherit the polynomial degree of their parent.
RefineResult refine(const Mesh &mesh, const DegreeMap &degrees,
                    std::span<const int> marked);

/// Applies `sweeps` rounds of `refine`, re-marking all descendants of the
/// originally marked triangles in each round. Two sweeps halve the diameter of
/// every marked triangle of a mesh made of right isosceles triangles.
RefineResult refine_sweeps(const Mesh &mesh, const DegreeMap &degrees,
                           std::span<const int> marked, int sweeps);

} // namespace hpdg
