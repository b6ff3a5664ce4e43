#include "hpdg/norms.hpp"

#include <cmath>
#include <limits>

#include "hpdg/errors.hpp"
#include "hpdg/quadrature.hpp"

namespace hpdg {

namespace {

HNorm integrate(const DgSolution &sol, const ComplexField &u, const VectorField &grad_u,
                bool subtract) {
  const auto &mesh = sol.mesh();
  const auto &problem = sol.problem();
  double l2 = 0.0, h1 = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto map = AffineMap::of(mesh, t);
    const double kmax = max_wavenumber_on_triangle(mesh, t, problem.wavenumber);
    const auto &rule =
        triangle_rule(problem.data_order(sol.degrees()[t], kmax, mesh.diameter(t)));
    for (int q = 0; q < rule.size(); ++q) {
      const Vec2 x = map.to_physical(rule.points[q]);
      const double w = rule.weights[q] * std::abs(map.det);
      const double k = problem.wavenumber(x);
      Complex v = u(x);
      CVec2 g = grad_u(x);
      if (subtract) {
        v -= sol.value(t, x);
        g -= sol.gradient(t, x);
      }
      l2 += w * k * k * std::norm(v);
      h1 += w * g.squaredNorm();
    }
  }
  return {std::sqrt(l2), std::sqrt(h1)};
}

} // namespace

HNorm h_norm_error(const DgSolution &sol, const ComplexField &u, const VectorField &grad_u) {
  return integrate(sol, u, grad_u, true);
}

HNorm h_norm(const DgSolution &sol, const ComplexField &u, const VectorField &grad_u) {
  return integrate(sol, u, grad_u, false);
}

DgNorm dg_norm(const DgSolution &v) {
  const auto &mesh = v.mesh();
  const auto &degrees = v.degrees();
  const auto &problem = v.problem();
  double grad2 = 0, kv2 = 0, gjump2 = 0, jump2 = 0, dn2 = 0, robin2 = 0, mean2 = 0;
  bool defined = true;

  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto map = AffineMap::of(mesh, t);
    const double kmax = max_wavenumber_on_triangle(mesh, t, problem.wavenumber);
    const auto &rule = triangle_rule(
        problem.constant_wavenumber ? 2 * degrees[t] + 2
                                    : problem.data_order(degrees[t], kmax, mesh.diameter(t)));
    for (int q = 0; q < rule.size(); ++q) {
      const Vec2 x = map.to_physical(rule.points[q]);
      const double w = rule.weights[q] * std::abs(map.det);
      const double k = problem.wavenumber(x);
      grad2 += w * v.gradient(t, x).squaredNorm();
      kv2 += w * k * k * std::norm(v.value(t, x));
    }
  }

  for (int e = 0; e < mesh.num_edges(); ++e) {
    const EdgeFrame f = edge_frame(mesh, e, problem.numerics.flip_jump_orientation);
    const int pe = degrees.edge_degree(mesh, e);
    const double h = f.length;
    if (!f.is_boundary()) {
      const auto &rule = edge_rule(2 * std::max(degrees[f.plus], degrees[f.minus]) + 2);
      for (int q = 0; q < rule.size(); ++q) {
        const Vec2 x = f.point(rule.points[q].x());
        const double w = rule.weights[q] * h;
        gjump2 += w * problem.beta * h / pe * std::norm(v.normal_gradient_jump(f, x));
        jump2 += w * problem.alpha * pe * pe / h * std::norm(v.jump(f, x));
        mean2 += w * h / (problem.alpha * pe * pe) * v.mean_gradient(f, x).squaredNorm();
      }
      continue;
    }
    const auto &rule = edge_rule(2 * degrees[f.plus] + 2);
    for (int q = 0; q < rule.size(); ++q) {
      const Vec2 x = f.point(rule.points[q].x());
      const double w = rule.weights[q] * h;
      const double k = problem.wavenumber(x);
      const double weight = k * (1.0 - problem.delta * k * h / pe);
      if (weight < 0.0)
        defined = false;
      const CVec2 g = v.gradient(f.plus, x);
      dn2 += w * problem.delta * h / pe * std::norm(g.x() * f.normal.x() + g.y() * f.normal.y());
      robin2 += w * weight * std::norm(v.value(f.plus, x));
    }
  }

  DgNorm out;
  out.defined = defined;
  if (!defined) {
    out.dg = out.dg_plus = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  const double dg2 = grad2 + gjump2 + jump2 + dn2 + robin2 + kv2;
  out.dg = std::sqrt(dg2);
  out.dg_plus = std::sqrt(dg2 + mean2);
  return out;
}

double dg_norm_or_throw(const DgSolution &v) {
  const DgNorm n = dg_norm(v);
  if (!n.defined)
    throw NormUndefined("boundary weight k (1 - d k h / p) is negative");
  return n.dg;
}

} // namespace hpdg
