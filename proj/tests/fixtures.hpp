#pragma once

#include <random>
#include <string>
#include <vector>

#include "hpdg/mesh.hpp"
#include "hpdg/mesh_io.hpp"
#include "hpdg/problem.hpp"
#include "hpdg/refine.hpp"

namespace fixtures {

using namespace hpdg;

// Helmholtz problem with constant k and zero data.
inline ProblemSpec constant_k(double k, double alpha = 30.0, double beta = 1.0,
                              double delta = 0.25) {
  ProblemSpec p;
  p.name = "constant";
  p.wavenumber = [k](const Vec2 &) { return k; };
  p.source = [](const Vec2 &) { return Complex(0.0); };
  p.boundary = [](const Vec2 &, const Vec2 &) { return Complex(0.0); };
  p.alpha = alpha;
  p.beta = beta;
  p.delta = delta;
  return p;
}

// Meshes with at most 8 triangles: structured ones, jittered copies, and
// locally refined ones.
inline std::vector<std::pair<std::string, Mesh>> small_meshes(std::uint64_t seed = 3) {
  std::vector<std::pair<std::string, Mesh>> out;
  out.emplace_back("reference triangle", Mesh::build({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}}));
  out.emplace_back("skew triangle", Mesh::build({{0.2, -0.1}, {1.7, 0.4}, {0.5, 1.3}}, {{0, 1, 2}}));
  out.emplace_back("unit square 1", unit_square_mesh(1));
  out.emplace_back("unit square 2", unit_square_mesh(2));
  out.emplace_back("L-shape 1", lshape_mesh(1));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.12, 0.12);
  for (int copy = 0; copy < 2; ++copy) {
    const Mesh base = unit_square_mesh(2);
    std::vector<Vec2> v(base.vertices().begin(), base.vertices().end());
    for (Vec2 &x : v)
      x += Vec2(jitter(rng), jitter(rng));
    std::vector<Triangle> t(base.triangles().begin(), base.triangles().end());
    out.emplace_back("jittered square " + std::to_string(copy), Mesh::build(v, t));
  }
  {
    const Mesh base = unit_square_mesh(1);
    const int marked[] = {0};
    RefineResult r = refine(base, DegreeMap::uniform(base, 1), marked);
    r = refine(r.mesh, r.degrees, std::vector<int>{0, 1});
    if (r.mesh.num_triangles() <= 8)
      out.emplace_back("refined square", r.mesh);
  }
  return out;
}

inline DegreeMap random_degrees(const Mesh &m, std::mt19937_64 &rng, int pmax = 3) {
  std::uniform_int_distribution<int> pick(1, pmax);
  std::vector<int> p(m.num_triangles());
  for (int &v : p)
    v = pick(rng);
  return DegreeMap(p);
}

} // namespace fixtures
