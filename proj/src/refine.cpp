#include "hpdg/refine.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <string>
#include <unordered_map>

#include "hpdg/errors.hpp"

namespace hpdg {

namespace {

std::uint64_t edge_key(int a, int b) {
  if (a > b)
    std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

class Bisector {
public:
  Bisector(const Mesh &mesh) : vertices_(mesh.vertices().begin(), mesh.vertices().end()) {
    const int nt = mesh.num_triangles();
    triangles_.assign(mesh.triangles().begin(), mesh.triangles().end());
    alive_.assign(nt, true);
    origin_.resize(nt);
    for (int t = 0; t < nt; ++t) {
      origin_[t] = t;
      attach(t);
    }
  }

  bool alive(int t) const { return alive_[t]; }

  bool has_hanging_edge(int t) const {
    const auto &tri = triangles_[t];
    for (int l = 0; l < 3; ++l)
      if (midpoints_.contains(edge_key(tri[l], tri[(l + 1) % 3])))
        return true;
    return false;
  }

  // Splits t across its longest edge and queues whatever the split leaves
  // nonconforming.
  void bisect(int t, std::deque<int> &queue) {
    Triangle tri = triangles_[t];
    const int l = longest_local_edge(tri);
    std::rotate(tri.begin(), tri.begin() + l, tri.end());
    const int a = tri[0], b = tri[1], c = tri[2];

    const std::uint64_t key = edge_key(a, b);
    int m;
    if (auto it = midpoints_.find(key); it != midpoints_.end()) {
      m = it->second;
    } else {
      m = static_cast<int>(vertices_.size());
      vertices_.push_back(0.5 * (vertices_[a] + vertices_[b]));
      midpoints_.emplace(key, m);
    }

    detach(t);
    alive_[t] = false;
    const int neighbor = other_triangle(key, t);

    const int c0 = push({a, m, c}, origin_[t]);
    const int c1 = push({m, b, c}, origin_[t]);
    if (neighbor >= 0)
      queue.push_back(neighbor);
    for (int child : {c0, c1})
      if (has_hanging_edge(child))
        queue.push_back(child);
  }

  RefineResult finish(const DegreeMap &degrees) {
    std::vector<Triangle> tris;
    std::vector<int> parent;
    std::vector<int> p;
    for (int t = 0; t < static_cast<int>(triangles_.size()); ++t)
      if (alive_[t]) {
        tris.push_back(triangles_[t]);
        parent.push_back(origin_[t]);
        p.push_back(degrees[origin_[t]]);
      }
    Mesh mesh = Mesh::build(std::move(vertices_), std::move(tris));
    return {std::move(mesh), DegreeMap(std::move(p)), std::move(parent)};
  }

  std::size_t num_triangles() const { return triangles_.size(); }

private:
  int longest_local_edge(const Triangle &tri) const {
    int best = 0;
    double best_len = -1.0;
    std::pair<int, int> best_pair{0, 0};
    for (int l = 0; l < 3; ++l) {
      const int a = tri[l], b = tri[(l + 1) % 3];
      const double len = (vertices_[b] - vertices_[a]).norm();
      const std::pair<int, int> pair{std::min(a, b), std::max(a, b)};
      const double tol = 1e-12 * std::max(len, best_len);
      if (len > best_len + tol || (std::abs(len - best_len) <= tol && pair < best_pair)) {
        best = l;
        best_len = std::max(len, best_len);
        best_pair = pair;
      }
    }
    return best;
  }

  int push(const Triangle &tri, int origin) {
    const int t = static_cast<int>(triangles_.size());
    triangles_.push_back(tri);
    alive_.push_back(true);
    origin_.push_back(origin);
    attach(t);
    return t;
  }

  void attach(int t) {
    const auto &tri = triangles_[t];
    for (int l = 0; l < 3; ++l) {
      auto &slot =
          edge_tris_.try_emplace(edge_key(tri[l], tri[(l + 1) % 3]), std::array<int, 2>{-1, -1})
              .first->second;
      if (slot[0] < 0)
        slot[0] = t;
      else
        slot[1] = t;
    }
  }

  void detach(int t) {
    const auto &tri = triangles_[t];
    for (int l = 0; l < 3; ++l) {
      auto it = edge_tris_.find(edge_key(tri[l], tri[(l + 1) % 3]));
      auto &slot = it->second;
      if (slot[0] == t) {
        slot[0] = slot[1];
        slot[1] = -1;
      } else if (slot[1] == t) {
        slot[1] = -1;
      }
      if (slot[0] < 0)
        edge_tris_.erase(it);
    }
  }

  int other_triangle(std::uint64_t key, int t) const {
    auto it = edge_tris_.find(key);
    if (it == edge_tris_.end())
      return -1;
    for (int s : it->second)
      if (s >= 0 && s != t)
        return s;
    return -1;
  }

  std::vector<Vec2> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<bool> alive_;
  std::vector<int> origin_;
  std::unordered_map<std::uint64_t, int> midpoints_;
  std::unordered_map<std::uint64_t, std::array<int, 2>> edge_tris_;
};

} // namespace

RefineResult refine(const Mesh &mesh, const DegreeMap &degrees,
                    std::span<const int> marked) {
  if (degrees.size() != mesh.num_triangles())
    throw InvalidParameter("degree map does not match mesh");
  std::vector<int> order(marked.begin(), marked.end());
  std::sort(order.begin(), order.end());
  order.erase(std::unique(order.begin(), order.end()), order.end());
  for (int t : order)
    if (t < 0 || t >= mesh.num_triangles())
      throw InvalidIndex("marked triangle " + std::to_string(t));

  Bisector bisector(mesh);
  // Each closure bisection either removes a hanging node or moves it onto a
  // strictly smaller triangle, so the loop is finite on valid meshes. The
  // bound only guards against broken input.
  const std::size_t limit = 64 * static_cast<std::size_t>(mesh.num_triangles()) + 1024 +
                            64 * order.size();
  std::deque<int> queue;
  for (int t : order) {
    if (bisector.alive(t))
      bisector.bisect(t, queue);
    while (!queue.empty()) {
      const int s = queue.front();
      queue.pop_front();
      if (bisector.alive(s) && bisector.has_hanging_edge(s))
        bisector.bisect(s, queue);
      if (bisector.num_triangles() > limit)
        throw ClosureNonTermination("closure exceeded " + std::to_string(limit) +
                                    " triangles");
    }
  }
  return bisector.finish(degrees);
}

RefineResult refine_sweeps(const Mesh &mesh, const DegreeMap &degrees,
                           std::span<const int> marked, int sweeps) {
  if (sweeps < 1)
    throw InvalidParameter("at least one bisection sweep is required");
  RefineResult result = refine(mesh, degrees, marked);
  for (int s = 1; s < sweeps; ++s) {
    std::vector<char> was_marked(mesh.num_triangles(), 0);
    for (int t : marked)
      was_marked[t] = 1;
    std::vector<int> next;
    for (int t = 0; t < result.mesh.num_triangles(); ++t)
      if (was_marked[result.parent[t]])
        next.push_back(t);
    RefineResult again = refine(result.mesh, result.degrees, next);
    for (auto &p : again.parent)
      p = result.parent[p];
    result = std::move(again);
  }
  return result;
}

} // namespace hpdg
