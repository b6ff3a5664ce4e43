#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "hpdg/basis.hpp"
#include "hpdg/mesh.hpp"
#include "hpdg/problem.hpp"
#include "hpdg/types.hpp"

namespace hpdg {

/// Element t owns coefficients [offset[t], offset[t] + basis_size(p_t)).
struct DofLayout {
  std::vector<int> offset;
  int size = 0;

  static DofLayout of(const DegreeMap &degrees);
  int block_size(int t) const { return offset[t + 1] - offset[t]; }
};

/// Geometry of one edge as seen by the jump operators. `plus` is the side
/// whose outward normal is `normal`; `minus` is -1 on the boundary.
struct EdgeFrame {
  int plus = -1;
  int minus = -1;
  Vec2 start, end;
  Vec2 normal;
  double length = 0.0;

  bool is_boundary() const { return minus < 0; }
  Vec2 point(double s) const { return start + s * (end - start); }
};

/// Jump sign convention: the lower-index triangle is "+" unless `flip`.
EdgeFrame edge_frame(const Mesh &mesh, int e, bool flip = false);

/// A function that is smooth on each triangle, evaluated from inside a given
/// triangle (so traces from both sides of an edge are available).
struct BrokenField {
  std::function<Complex(int t, const Vec2 &x)> value;
  std::function<CVec2(int t, const Vec2 &x)> gradient;
};

/// Piecewise polynomial field over a mesh. Holds non-owning references to the
/// mesh, degrees and problem, which must outlive it.
class DgSolution {
public:
  DgSolution(const Mesh &mesh, const DegreeMap &degrees, const ProblemSpec &problem,
             Eigen::VectorXcd coefficients);
  DgSolution(Mesh &&, const DegreeMap &, const ProblemSpec &, Eigen::VectorXcd) = delete;
  DgSolution(const Mesh &, DegreeMap &&, const ProblemSpec &, Eigen::VectorXcd) = delete;
  DgSolution(const Mesh &, const DegreeMap &, ProblemSpec &&, Eigen::VectorXcd) = delete;

  const Mesh &mesh() const { return *mesh_; }
  const DegreeMap &degrees() const { return *degrees_; }
  const ProblemSpec &problem() const { return *problem_; }
  const DofLayout &layout() const { return layout_; }
  const Eigen::VectorXcd &coefficients() const { return coeffs_; }

  auto block(int t) const { return coeffs_.segment(layout_.offset[t], layout_.block_size(t)); }

  Complex value(int t, const Vec2 &x) const;
  CVec2 gradient(int t, const Vec2 &x) const;
  Complex laplacian(int t, const Vec2 &x) const;

  /// [[v]] on edge e at x: trace from the "+" side minus trace from the "-"
  /// side; the plain trace on boundary edges.
  Complex jump(const EdgeFrame &frame, const Vec2 &x) const;
  /// [[grad v]]_N on an interior edge: (grad v+ - grad v-) . n+.
  Complex normal_gradient_jump(const EdgeFrame &frame, const Vec2 &x) const;
  /// {grad v} on an interior edge.
  CVec2 mean_gradient(const EdgeFrame &frame, const Vec2 &x) const;

  BrokenField as_field() const;

private:
  const Mesh *mesh_;
  const DegreeMap *degrees_;
  const ProblemSpec *problem_;
  DofLayout layout_;
  Eigen::VectorXcd coeffs_;
  std::vector<AffineMap> maps_;
};

/// L2 interpolation of a smooth function into the dG space: elementwise L2
/// projection computed at the given quadrature exactness.
Eigen::VectorXcd project(const Mesh &mesh, const DegreeMap &degrees, const ComplexField &u,
                         int exactness);

} // namespace hpdg
