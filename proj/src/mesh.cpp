#include "hpdg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <tuple>

#include <Eigen/Geometry>

#include "hpdg/errors.hpp"

namespace hpdg {

namespace {

double signed_area(const Vec2 &a, const Vec2 &b, const Vec2 &c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x()));
}

std::string tri_str(int t) { return "triangle " + std::to_string(t); }

// A vertex strictly inside a boundary-flagged edge means the edge is a side of
// a larger triangle whose neighbor got split there.
void check_hanging_nodes(const std::vector<Vec2> &vertices,
                         const std::vector<Edge> &edges) {
  std::vector<int> boundary;
  double total = 0.0;
  for (int e = 0; e < static_cast<int>(edges.size()); ++e)
    if (edges[e].is_boundary()) {
      boundary.push_back(e);
      total += edges[e].length;
    }
  if (boundary.empty() || vertices.empty())
    return;

  Eigen::AlignedBox2d box;
  for (const auto &v : vertices)
    box.extend(v);
  const double cell = std::max(total / boundary.size(), 1e-300);
  const Vec2 lo = box.min();
  const int nx = std::max(1, std::min(4096, static_cast<int>(box.sizes().x() / cell) + 1));
  const int ny = std::max(1, std::min(4096, static_cast<int>(box.sizes().y() / cell) + 1));
  const double cx = std::max(box.sizes().x(), 1e-300) / nx;
  const double cy = std::max(box.sizes().y(), 1e-300) / ny;
  auto cell_of = [&](const Vec2 &p) {
    int i = std::clamp(static_cast<int>((p.x() - lo.x()) / cx), 0, nx - 1);
    int j = std::clamp(static_cast<int>((p.y() - lo.y()) / cy), 0, ny - 1);
    return std::pair{i, j};
  };

  std::vector<int> offset(static_cast<std::size_t>(nx) * ny + 1, 0);
  for (const auto &v : vertices) {
    auto [i, j] = cell_of(v);
    ++offset[static_cast<std::size_t>(j) * nx + i + 1];
  }
  std::partial_sum(offset.begin(), offset.end(), offset.begin());
  std::vector<int> bucket(vertices.size());
  {
    auto fill = offset;
    for (int v = 0; v < static_cast<int>(vertices.size()); ++v) {
      auto [i, j] = cell_of(vertices[v]);
      bucket[fill[static_cast<std::size_t>(j) * nx + i]++] = v;
    }
  }

  for (int e : boundary) {
    const Vec2 &a = vertices[edges[e].vertices[0]];
    const Vec2 &b = vertices[edges[e].vertices[1]];
    const Vec2 d = b - a;
    const double len2 = d.squaredNorm();
    const double tol = 1e-10 * std::sqrt(len2);
    auto [i0, j0] = cell_of(a.cwiseMin(b) - Vec2::Constant(tol));
    auto [i1, j1] = cell_of(a.cwiseMax(b) + Vec2::Constant(tol));
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) {
        const std::size_t c = static_cast<std::size_t>(j) * nx + i;
        for (int k = offset[c]; k < offset[c + 1]; ++k) {
          const int v = bucket[k];
          if (v == edges[e].vertices[0] || v == edges[e].vertices[1])
            continue;
          const Vec2 w = vertices[v] - a;
          const double s = w.dot(d) / len2;
          if (s <= 1e-12 || s >= 1.0 - 1e-12)
            continue;
          const double dist = std::abs(d.x() * w.y() - d.y() * w.x()) / std::sqrt(len2);
          if (dist <= tol)
            throw HangingNode("vertex " + std::to_string(v) + " lies inside edge (" +
                              std::to_string(edges[e].vertices[0]) + ", " +
                              std::to_string(edges[e].vertices[1]) + ")");
        }
      }
  }
}

} // namespace

Mesh Mesh::build(std::vector<Vec2> vertices, std::vector<Triangle> triangles) {
  Mesh m;
  const int nv = static_cast<int>(vertices.size());
  const int nt = static_cast<int>(triangles.size());
  if (nt == 0)
    throw EmptyMesh("mesh has no triangles");

  m.area_.resize(nt);
  m.diameter_.resize(nt);
  for (int t = 0; t < nt; ++t) {
    auto &tri = triangles[t];
    for (int v : tri)
      if (v < 0 || v >= nv)
        throw InvalidIndex(tri_str(t) + " references vertex " + std::to_string(v));
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
      throw DegenerateTriangle(tri_str(t) + " repeats a vertex");
    const Vec2 &a = vertices[tri[0]], &b = vertices[tri[1]], &c = vertices[tri[2]];
    const double h = std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
    double area = signed_area(a, b, c);
    if (std::abs(area) <= 1e-14 * h * h)
      throw DegenerateTriangle(tri_str(t) + " has zero area");
    if (area < 0) {
      std::swap(tri[1], tri[2]);
      area = -area;
    }
    m.area_[t] = area;
    m.diameter_[t] = h;
  }

  // Duplicate detection on sorted vertex triples.
  {
    std::vector<std::pair<Triangle, int>> sorted(nt);
    for (int t = 0; t < nt; ++t) {
      Triangle s = triangles[t];
      std::sort(s.begin(), s.end());
      sorted[t] = {s, t};
    }
    std::sort(sorted.begin(), sorted.end());
    for (int i = 1; i < nt; ++i)
      if (sorted[i].first == sorted[i - 1].first)
        throw DuplicateTriangle(tri_str(sorted[i - 1].second) + " and " +
                                tri_str(sorted[i].second));
  }

  // Edge topology: sort (vertex pair, triangle, local) records.
  struct HalfEdge {
    std::array<int, 2> key;
    int tri;
    int local;
    bool operator<(const HalfEdge &o) const {
      return std::tie(key, tri, local) < std::tie(o.key, o.tri, o.local);
    }
  };
  std::vector<HalfEdge> half(3 * static_cast<std::size_t>(nt));
  for (int t = 0; t < nt; ++t)
    for (int l = 0; l < 3; ++l) {
      int a = triangles[t][l], b = triangles[t][(l + 1) % 3];
      half[3 * t + l] = {{std::min(a, b), std::max(a, b)}, t, l};
    }
  std::sort(half.begin(), half.end());

  m.tri_edges_.assign(nt, {-1, -1, -1});
  for (std::size_t i = 0; i < half.size();) {
    std::size_t j = i;
    while (j < half.size() && half[j].key == half[i].key)
      ++j;
    if (j - i > 2)
      throw NonManifoldEdge("edge (" + std::to_string(half[i].key[0]) + ", " +
                            std::to_string(half[i].key[1]) + ") has " +
                            std::to_string(j - i) + " triangles");
    Edge e;
    e.vertices = half[i].key;
    e.length = (vertices[e.vertices[1]] - vertices[e.vertices[0]]).norm();
    for (std::size_t s = 0; s < j - i; ++s) {
      e.triangles[s] = half[i + s].tri;
      e.local[s] = half[i + s].local;
    }
    if (j - i == 2) {
      // Consistent orientation: the two triangles traverse the edge in
      // opposite directions.
      const auto &t0 = triangles[e.triangles[0]];
      const auto &t1 = triangles[e.triangles[1]];
      if (t0[e.local[0]] == t1[e.local[1]])
        throw NonManifoldEdge("triangles " + std::to_string(e.triangles[0]) + " and " +
                              std::to_string(e.triangles[1]) + " overlap");
    }
    const int id = static_cast<int>(m.edges_.size());
    for (std::size_t s = 0; s < j - i; ++s)
      m.tri_edges_[half[i + s].tri][half[i + s].local] = id;
    m.edges_.push_back(e);
    i = j;
  }

  check_hanging_nodes(vertices, m.edges_);

  m.vertex_tri_offset_.assign(nv + 1, 0);
  for (const auto &tri : triangles)
    for (int v : tri)
      ++m.vertex_tri_offset_[v + 1];
  std::partial_sum(m.vertex_tri_offset_.begin(), m.vertex_tri_offset_.end(),
                   m.vertex_tri_offset_.begin());
  m.vertex_tri_list_.resize(m.vertex_tri_offset_.back());
  {
    auto fill = m.vertex_tri_offset_;
    for (int t = 0; t < nt; ++t)
      for (int v : triangles[t])
        m.vertex_tri_list_[fill[v]++] = t;
  }

  m.vertices_ = std::move(vertices);
  m.triangles_ = std::move(triangles);
  return m;
}

double Mesh::inscribed_diameter(int t) const {
  const auto &tri = triangles_[t];
  double perimeter = 0.0;
  for (int l = 0; l < 3; ++l)
    perimeter += (vertices_[tri[(l + 1) % 3]] - vertices_[tri[l]]).norm();
  return 4.0 * area_[t] / perimeter;
}

Vec2 Mesh::centroid(int t) const {
  const auto &tri = triangles_[t];
  return (vertices_[tri[0]] + vertices_[tri[1]] + vertices_[tri[2]]) / 3.0;
}

Vec2 Mesh::outward_normal(int t, int local) const {
  const auto &tri = triangles_[t];
  const Vec2 d = vertices_[tri[(local + 1) % 3]] - vertices_[tri[local]];
  return Vec2(d.y(), -d.x()).normalized();
}

int Mesh::local_edge_index(int t, int e) const {
  for (int l = 0; l < 3; ++l)
    if (tri_edges_[t][l] == e)
      return l;
  return -1;
}

int Mesh::find_edge(int a, int b) const {
  if (a > b)
    std::swap(a, b);
  auto it = std::lower_bound(edges_.begin(), edges_.end(), std::array<int, 2>{a, b},
                             [](const Edge &e, const std::array<int, 2> &key) {
                               return e.vertices < key;
                             });
  if (it != edges_.end() && it->vertices == std::array<int, 2>{a, b})
    return static_cast<int>(it - edges_.begin());
  return -1;
}

std::span<const int> Mesh::vertex_triangles(int v) const {
  return std::span<const int>(vertex_tri_list_).subspan(
      vertex_tri_offset_[v], vertex_tri_offset_[v + 1] - vertex_tri_offset_[v]);
}

double Mesh::h_max_edges() const {
  double h = 0.0;
  for (const auto &e : edges_)
    h = std::max(h, e.length);
  return h;
}

double Mesh::h_min_edges() const {
  double h = std::numeric_limits<double>::infinity();
  for (const auto &e : edges_)
    h = std::min(h, e.length);
  return h;
}

double Mesh::total_area() const {
  return std::accumulate(area_.begin(), area_.end(), 0.0);
}

double shape_regularity(const Mesh &mesh) {
  double rho = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t)
    rho = std::max(rho, mesh.diameter(t) / mesh.inscribed_diameter(t));
  return rho;
}

std::vector<int> element_patch(const Mesh &mesh, int t) {
  std::vector<int> out;
  for (int v : mesh.triangle(t))
    for (int s : mesh.vertex_triangles(v))
      out.push_back(s);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<int> edge_patch(const Mesh &mesh, int e) {
  std::vector<int> out;
  for (int v : mesh.edge(e).vertices)
    for (int s : mesh.vertex_triangles(v))
      out.push_back(s);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

DegreeMap::DegreeMap(std::vector<int> degrees) : degrees_(std::move(degrees)) {
  for (int p : degrees_)
    if (p < 0)
      throw InvalidParameter("negative polynomial degree");
}

DegreeMap DegreeMap::uniform(const Mesh &mesh, int degree) {
  return DegreeMap(std::vector<int>(mesh.num_triangles(), degree));
}

int DegreeMap::min_degree() const {
  return degrees_.empty() ? 0 : *std::min_element(degrees_.begin(), degrees_.end());
}

int DegreeMap::max_degree() const {
  return degrees_.empty() ? 0 : *std::max_element(degrees_.begin(), degrees_.end());
}

int DegreeMap::edge_degree(const Mesh &mesh, int e) const {
  const auto &edge = mesh.edge(e);
  int p = degrees_[edge.triangles[0]];
  if (!edge.is_boundary())
    p = std::min(p, degrees_[edge.triangles[1]]);
  return p;
}

bool DegreeMap::is_comparable(const Mesh &mesh, double rho) const {
  for (int t = 0; t < mesh.num_triangles(); ++t)
    for (int s : element_patch(mesh, t)) {
      const double a = degrees_[t] + 1.0, b = degrees_[s] + 1.0;
      if (b < a / rho || b > a * rho)
        return false;
    }
  return true;
}

int DegreeMap::num_dofs() const {
  int n = 0;
  for (int p : degrees_)
    n += (p + 1) * (p + 2) / 2;
  return n;
}

double max_wavenumber_on_triangle(const Mesh &mesh, int t, const RealField &k) {
  const auto &tri = mesh.triangle(t);
  double kmax = k(mesh.centroid(t));
  for (int l = 0; l < 3; ++l) {
    const Vec2 &a = mesh.vertex(tri[l]);
    const Vec2 &b = mesh.vertex(tri[(l + 1) % 3]);
    kmax = std::max({kmax, k(a), k(0.5 * (a + b))});
  }
  return kmax;
}

double max_wavenumber_on_edge(const Mesh &mesh, int e, const RealField &k) {
  const Vec2 &a = mesh.vertex(mesh.edge(e).vertices[0]);
  const Vec2 &b = mesh.vertex(mesh.edge(e).vertices[1]);
  return std::max({k(a), k(b), k(0.5 * (a + b))});
}

MeshFunctions mesh_functions(const Mesh &mesh, const DegreeMap &degrees,
                             const RealField &wavenumber) {
  MeshFunctions out;
  const int nt = mesh.num_triangles();
  const int ne = mesh.num_edges();
  out.element_h.resize(nt);
  out.element_p.resize(nt);
  out.edge_h.resize(ne);
  out.edge_p.resize(ne);

  auto check = [](double k) {
    if (!(k > 0.0))
      throw NonpositiveWavenumber("sampled k = " + std::to_string(k));
  };

  for (int t = 0; t < nt; ++t) {
    out.element_h[t] = mesh.diameter(t);
    out.element_p[t] = degrees[t];
    // Every sample point must be positive, not only the maximum.
    const auto &tri = mesh.triangle(t);
    check(wavenumber(mesh.centroid(t)));
    for (int v : tri)
      check(wavenumber(mesh.vertex(v)));
    const double k = max_wavenumber_on_triangle(mesh, t, wavenumber);
    out.element_khp = std::max(out.element_khp, k * mesh.diameter(t) / degrees[t]);
  }
  for (int e = 0; e < ne; ++e) {
    out.edge_h[e] = mesh.edge(e).length;
    out.edge_p[e] = degrees.edge_degree(mesh, e);
    const double k = max_wavenumber_on_edge(mesh, e, wavenumber);
    check(k);
    out.skeleton_khp = std::max(out.skeleton_khp, k * out.edge_h[e] / out.edge_p[e]);
  }
  out.m_khp = std::max(out.skeleton_khp, out.element_khp);
  return out;
}

} // namespace hpdg
