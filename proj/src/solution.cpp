#include "hpdg/solution.hpp"

#include "hpdg/errors.hpp"
#include "hpdg/quadrature.hpp"

namespace hpdg {

DofLayout DofLayout::of(const DegreeMap &degrees) {
  DofLayout layout;
  layout.offset.resize(degrees.size() + 1);
  layout.offset[0] = 0;
  for (int t = 0; t < degrees.size(); ++t)
    layout.offset[t + 1] = layout.offset[t] + basis_size(degrees[t]);
  layout.size = layout.offset.back();
  return layout;
}

EdgeFrame edge_frame(const Mesh &mesh, int e, bool flip) {
  const Edge &edge = mesh.edge(e);
  EdgeFrame f;
  f.plus = edge.triangles[0];
  f.minus = edge.triangles[1];
  int local = edge.local[0];
  if (flip && f.minus >= 0) {
    std::swap(f.plus, f.minus);
    local = edge.local[1];
  }
  f.start = mesh.vertex(edge.vertices[0]);
  f.end = mesh.vertex(edge.vertices[1]);
  f.length = edge.length;
  f.normal = mesh.outward_normal(f.plus, local);
  return f;
}

DgSolution::DgSolution(const Mesh &mesh, const DegreeMap &degrees, const ProblemSpec &problem,
                       Eigen::VectorXcd coefficients)
    : mesh_(&mesh), degrees_(&degrees), problem_(&problem), layout_(DofLayout::of(degrees)),
      coeffs_(std::move(coefficients)) {
  if (coeffs_.size() != layout_.size)
    throw InvalidParameter("coefficient vector does not match the degree map");
  maps_.reserve(mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t)
    maps_.push_back(AffineMap::of(mesh, t));
}

Complex DgSolution::value(int t, const Vec2 &x) const {
  const auto &basis = LocalBasis::get((*degrees_)[t]);
  Eigen::VectorXd phi(basis.size());
  basis.values(maps_[t].to_reference(x), phi);
  return phi.cast<Complex>().dot(block(t));
}

CVec2 DgSolution::gradient(int t, const Vec2 &x) const {
  const auto &basis = LocalBasis::get((*degrees_)[t]);
  Eigen::MatrixX2d g(basis.size(), 2);
  basis.gradients(maps_[t].to_reference(x), g);
  const Eigen::MatrixX2d phys = maps_[t].physical_gradients(g);
  return phys.cast<Complex>().transpose() * block(t);
}

Complex DgSolution::laplacian(int t, const Vec2 &x) const {
  const auto &basis = LocalBasis::get((*degrees_)[t]);
  Eigen::MatrixX3d h(basis.size(), 3);
  basis.hessians(maps_[t].to_reference(x), h);
  const Eigen::VectorXd lap = maps_[t].physical_laplacians(h);
  return (lap.cast<Complex>().transpose() * block(t))(0);
}

Complex DgSolution::jump(const EdgeFrame &f, const Vec2 &x) const {
  Complex v = value(f.plus, x);
  if (!f.is_boundary())
    v -= value(f.minus, x);
  return v;
}

Complex DgSolution::normal_gradient_jump(const EdgeFrame &f, const Vec2 &x) const {
  const CVec2 d = gradient(f.plus, x) - gradient(f.minus, x);
  return d.x() * f.normal.x() + d.y() * f.normal.y();
}

CVec2 DgSolution::mean_gradient(const EdgeFrame &f, const Vec2 &x) const {
  return 0.5 * (gradient(f.plus, x) + gradient(f.minus, x));
}

BrokenField DgSolution::as_field() const {
  return {[this](int t, const Vec2 &x) { return value(t, x); },
          [this](int t, const Vec2 &x) { return gradient(t, x); }};
}

Eigen::VectorXcd project(const Mesh &mesh, const DegreeMap &degrees, const ComplexField &u,
                         int exactness) {
  const DofLayout layout = DofLayout::of(degrees);
  Eigen::VectorXcd c(layout.size);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto &basis = LocalBasis::get(degrees[t]);
    const auto map = AffineMap::of(mesh, t);
    const auto &rule = triangle_rule(std::max(exactness, 2 * degrees[t]));
    const int n = basis.size();
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);
    Eigen::VectorXd phi(n);
    for (int q = 0; q < rule.size(); ++q) {
      basis.values(rule.points[q], phi);
      const double w = rule.weights[q];
      gram.noalias() += w * phi * phi.transpose();
      rhs += (w * u(map.to_physical(rule.points[q]))) * phi.cast<Complex>();
    }
    c.segment(layout.offset[t], n) = gram.ldlt().solve(rhs);
  }
  return c;
}

} // namespace hpdg
