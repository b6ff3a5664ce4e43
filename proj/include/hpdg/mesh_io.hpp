#pragma once

#include <iosfwd>
#include <string>

#include "hpdg/mesh.hpp"

namespace hpdg {

// ASCII mesh format, 0-based indices:
//
//   <num_vertices>
//   <index> <x> <y>          (one line per vertex)
//   <num_triangles>
//   <index> <v0> <v1> <v2>   (one line per triangle)
//
// Blank lines and lines starting with '#' are ignored.

void write_mesh(std::ostream &out, const Mesh &mesh);
void write_mesh(const std::string &path, const Mesh &mesh);

/// Throws ParseError on malformed input, plus anything Mesh::build throws.
Mesh read_mesh(std::istream &in);
Mesh read_mesh(const std::string &path);

/// [x0, x1] x [y0, y1] split into n x n squares, two triangles each.
Mesh rectangle_mesh(double x0, double x1, double y0, double y1, int n);
Mesh unit_square_mesh(int n);
/// (0, 2 pi)^2.
Mesh periodic_box_mesh(int n);
/// (-1, 1)^2 minus [0, 1] x [-1, 0]; the reentrant corner sits at the origin.
/// Each of the three unit squares is split into n x n squares.
Mesh lshape_mesh(int n);

} // namespace hpdg
