#include "hpdg/mesh_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <sstream>

#include "hpdg/errors.hpp"

namespace hpdg {

void write_mesh(std::ostream &out, const Mesh &mesh) {
  out << std::setprecision(17);
  out << mesh.num_vertices() << '\n';
  for (int v = 0; v < mesh.num_vertices(); ++v)
    out << v << ' ' << mesh.vertex(v).x() << ' ' << mesh.vertex(v).y() << '\n';
  out << mesh.num_triangles() << '\n';
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto &tri = mesh.triangle(t);
    out << t << ' ' << tri[0] << ' ' << tri[1] << ' ' << tri[2] << '\n';
  }
}

void write_mesh(const std::string &path, const Mesh &mesh) {
  std::ofstream out(path);
  if (!out)
    throw Error("cannot open " + path + " for writing");
  write_mesh(out, mesh);
}

namespace {

class LineReader {
public:
  explicit LineReader(std::istream &in) : in_(in) {}

  std::istringstream next(const char *what) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#')
        continue;
      return std::istringstream(line);
    }
    throw ParseError(std::string("unexpected end of input, expected ") + what);
  }

  [[noreturn]] void fail(const std::string &msg) const {
    throw ParseError("line " + std::to_string(line_no_) + ": " + msg);
  }

private:
  std::istream &in_;
  int line_no_ = 0;
};

} // namespace

Mesh read_mesh(std::istream &in) {
  LineReader reader(in);
  long nv = -1;
  if (!(reader.next("vertex count") >> nv) || nv < 0)
    reader.fail("bad vertex count");
  std::vector<Vec2> vertices(nv);
  for (long i = 0; i < nv; ++i) {
    auto line = reader.next("vertex");
    long idx;
    double x, y;
    if (!(line >> idx >> x >> y))
      reader.fail("expected '<index> <x> <y>'");
    if (idx != i)
      reader.fail("vertex indices must be consecutive from 0");
    vertices[i] = Vec2(x, y);
  }
  long nt = -1;
  if (!(reader.next("triangle count") >> nt) || nt < 0)
    reader.fail("bad triangle count");
  std::vector<Triangle> triangles(nt);
  for (long i = 0; i < nt; ++i) {
    auto line = reader.next("triangle");
    long idx;
    Triangle t;
    if (!(line >> idx >> t[0] >> t[1] >> t[2]))
      reader.fail("expected '<index> <v0> <v1> <v2>'");
    if (idx != i)
      reader.fail("triangle indices must be consecutive from 0");
    triangles[i] = t;
  }
  return Mesh::build(std::move(vertices), std::move(triangles));
}

Mesh read_mesh(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ParseError("cannot open " + path);
  return read_mesh(in);
}

namespace {

// Vertices of a structured grid are shared through an integer-keyed map so
// that adjacent blocks of the L-shape join conformingly.
class GridBuilder {
public:
  int vertex(long i, long j, const Vec2 &p) {
    auto [it, inserted] = index_.try_emplace({i, j}, static_cast<int>(vertices_.size()));
    if (inserted)
      vertices_.push_back(p);
    return it->second;
  }

  // Square [x0, x0 + h] x [y0, y0 + h] subdivided n x n, global lattice offset
  // (i0, j0).
  void block(double x0, double y0, double h, int n, long i0, long j0) {
    const double s = h / n;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        int a = vertex(i0 + i, j0 + j, {x0 + i * s, y0 + j * s});
        int b = vertex(i0 + i + 1, j0 + j, {x0 + (i + 1) * s, y0 + j * s});
        int c = vertex(i0 + i + 1, j0 + j + 1, {x0 + (i + 1) * s, y0 + (j + 1) * s});
        int d = vertex(i0 + i, j0 + j + 1, {x0 + i * s, y0 + (j + 1) * s});
        triangles_.push_back({a, b, c});
        triangles_.push_back({a, c, d});
      }
  }

  Mesh finish() { return Mesh::build(std::move(vertices_), std::move(triangles_)); }

private:
  std::map<std::pair<long, long>, int> index_;
  std::vector<Vec2> vertices_;
  std::vector<Triangle> triangles_;
};

} // namespace

Mesh rectangle_mesh(double x0, double x1, double y0, double y1, int n) {
  if (n < 1)
    throw InvalidParameter("mesh resolution must be >= 1");
  std::vector<Vec2> vertices;
  std::vector<Triangle> triangles;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      vertices.emplace_back(x0 + (x1 - x0) * i / n, y0 + (y1 - y0) * j / n);
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  return Mesh::build(std::move(vertices), std::move(triangles));
}

Mesh unit_square_mesh(int n) { return rectangle_mesh(0.0, 1.0, 0.0, 1.0, n); }

Mesh periodic_box_mesh(int n) {
  const double L = 2.0 * std::numbers::pi;
  return rectangle_mesh(0.0, L, 0.0, L, n);
}

Mesh lshape_mesh(int n) {
  if (n < 1)
    throw InvalidParameter("mesh resolution must be >= 1");
  GridBuilder g;
  g.block(-1.0, -1.0, 1.0, n, 0, 0);
  g.block(-1.0, 0.0, 1.0, n, 0, n);
  g.block(0.0, 0.0, 1.0, n, n, n);
  return g.finish();
}

} // namespace hpdg
