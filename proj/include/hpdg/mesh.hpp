#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "hpdg/types.hpp"

namespace hpdg {

using Triangle = std::array<int, 3>;

/// An edge of the triangulation. `vertices` is sorted ascending. `triangles[1]`
/// is -1 on the boundary. `local[s]` is the local edge index of the edge in
/// `triangles[s]`.
struct Edge {
  std::array<int, 2> vertices{-1, -1};
  std::array<int, 2> triangles{-1, -1};
  std::array<int, 2> local{-1, -1};
  double length = 0.0;

  bool is_boundary() const { return triangles[1] < 0; }
};

/// Conforming triangulation of a polygonal domain.
///
/// Triangles are stored counterclockwise. Local edge i of a triangle joins its
/// local vertices i and (i+1) mod 3. Edges are numbered in lexicographic order
/// of their sorted vertex pairs, so the global edge index is a deterministic
/// function of the vertex numbering.
///
/// A Mesh is immutable after construction.
class Mesh {
public:
  /// Validates the input and builds the full edge topology.
  ///
  /// Clockwise triangles are reoriented. Throws EmptyMesh, InvalidIndex,
  /// DegenerateTriangle, DuplicateTriangle, NonManifoldEdge or HangingNode.
  static Mesh build(std::vector<Vec2> vertices, std::vector<Triangle> triangles);

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_triangles() const { return static_cast<int>(triangles_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  const Vec2 &vertex(int i) const { return vertices_[i]; }
  const Triangle &triangle(int t) const { return triangles_[t]; }
  const Edge &edge(int e) const { return edges_[e]; }
  const std::array<int, 3> &triangle_edges(int t) const { return tri_edges_[t]; }

  std::span<const Vec2> vertices() const { return vertices_; }
  std::span<const Triangle> triangles() const { return triangles_; }
  std::span<const Edge> edges() const { return edges_; }

  double area(int t) const { return area_[t]; }
  /// Diameter h_K, the longest edge.
  double diameter(int t) const { return diameter_[t]; }
  /// Diameter of the inscribed circle, 2 * area / semiperimeter.
  double inscribed_diameter(int t) const;
  Vec2 centroid(int t) const;

  /// Outward unit normal of triangle t on its local edge `local`.
  Vec2 outward_normal(int t, int local) const;

  /// Index (0..2) of the local edge of t with global index e, or -1.
  int local_edge_index(int t, int e) const;

  /// Global index of the edge joining vertices a and b, or -1.
  int find_edge(int a, int b) const;

  std::span<const int> vertex_triangles(int v) const;

  double h_max_edges() const;
  double h_min_edges() const;
  double total_area() const;

private:
  std::vector<Vec2> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 3>> tri_edges_;
  std::vector<double> area_;
  std::vector<double> diameter_;
  std::vector<int> vertex_tri_offset_;
  std::vector<int> vertex_tri_list_;
};

/// rho_T: maximum over triangles of h_K over the inscribed circle diameter.
double shape_regularity(const Mesh &mesh);

/// Triangles that share at least one vertex with triangle t (including t),
/// sorted ascending.
std::vector<int> element_patch(const Mesh &mesh, int t);

/// Triangles that intersect edge e, i.e. contain at least one endpoint of e,
/// sorted ascending.
std::vector<int> edge_patch(const Mesh &mesh, int e);

/// Per-triangle polynomial degrees.
class DegreeMap {
public:
  DegreeMap() = default;
  explicit DegreeMap(std::vector<int> degrees);
  static DegreeMap uniform(const Mesh &mesh, int degree);

  int operator[](int t) const { return degrees_[t]; }
  int size() const { return static_cast<int>(degrees_.size()); }
  std::span<const int> values() const { return degrees_; }

  int min_degree() const;
  int max_degree() const;

  /// p_e: minimum degree over the triangles adjacent to edge e.
  int edge_degree(const Mesh &mesh, int e) const;

  /// Neighbor comparability: rho^-1 (p_K + 1) <= p_K' + 1 <= rho (p_K + 1) for
  /// every pair of triangles that share a vertex.
  bool is_comparable(const Mesh &mesh, double rho) const;

  /// Number of local coefficients, (p + 1)(p + 2) / 2 summed over triangles.
  int num_dofs() const;

private:
  std::vector<int> degrees_;
};

/// Elementwise and edgewise h/p data together with M_kh/p.
struct MeshFunctions {
  std::vector<double> element_h;
  std::vector<int> element_p;
  std::vector<double> edge_h;
  std::vector<int> edge_p;
  /// Largest k * h / p over all edges.
  double skeleton_khp = 0.0;
  /// Largest k * h / p over all elements.
  double element_khp = 0.0;
  double m_khp = 0.0;
};

/// Samples k at the vertices, edge midpoints and centroid of each triangle and
/// at the endpoints and midpoint of each edge. Throws NonpositiveWavenumber.
MeshFunctions mesh_functions(const Mesh &mesh, const DegreeMap &degrees,
                             const RealField &wavenumber);

/// Largest sampled value of k on triangle t (vertices, midpoints, centroid).
double max_wavenumber_on_triangle(const Mesh &mesh, int t, const RealField &k);
/// Largest sampled value of k on edge e (endpoints and midpoint).
double max_wavenumber_on_edge(const Mesh &mesh, int e, const RealField &k);

} // namespace hpdg
