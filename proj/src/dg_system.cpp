#include "hpdg/dg_system.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include <Eigen/UmfPackSupport>

#include "hpdg/errors.hpp"
#include "hpdg/quadrature.hpp"

namespace hpdg {

namespace {

using Eigen::MatrixX2d;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

// Basis values and physical gradients of one triangle at physical points.
class ElementBasis {
public:
  ElementBasis(const Mesh &mesh, int t, int p)
      : basis_(&LocalBasis::get(p)), map_(AffineMap::of(mesh, t)), phi(basis_->size()),
        grad(basis_->size(), 2), ref_grad_(basis_->size(), 2) {}

  int size() const { return basis_->size(); }
  const AffineMap &map() const { return map_; }

  void eval_reference(const Vec2 &ref) {
    basis_->values(ref, phi);
    basis_->gradients(ref, ref_grad_);
    grad.noalias() = ref_grad_ * map_.inverse;
  }
  void eval(const Vec2 &x) { eval_reference(map_.to_reference(x)); }

  VectorXd normal_derivatives(const Vec2 &n) const { return grad * n; }

private:
  const LocalBasis *basis_;
  AffineMap map_;

public:
  VectorXd phi;
  MatrixX2d grad;

private:
  MatrixX2d ref_grad_;
};

int volume_order(const ProblemSpec &problem, int p, double k, double h) {
  return problem.constant_wavenumber ? 2 * p + 2 : problem.data_order(p, k, h);
}

const QuadratureRule &checked_triangle_rule(int order) {
  try {
    return triangle_rule(order);
  } catch (const UnsupportedDegree &e) {
    throw QuadratureUnavailable(e.what());
  }
}

const QuadratureRule &checked_edge_rule(int order) {
  try {
    return edge_rule(order);
  } catch (const UnsupportedDegree &e) {
    throw QuadratureUnavailable(e.what());
  }
}

void check_inputs(const Mesh &mesh, const DegreeMap &degrees, const ProblemSpec &problem) {
  if (mesh.num_triangles() == 0)
    throw EmptyMesh("mesh has no triangles");
  if (degrees.size() != mesh.num_triangles())
    throw InvalidParameter("degree map does not match mesh");
  if (degrees.min_degree() < 1)
    throw InvalidParameter("polynomial degrees must be >= 1");
  problem.validate();
}

class TripletSink {
public:
  explicit TripletSink(const DofLayout &layout) : layout_(layout) {}

  void add(int row_elem, int col_elem, const MatrixXcd &block) {
    const int r0 = layout_.offset[row_elem], c0 = layout_.offset[col_elem];
    for (int j = 0; j < block.cols(); ++j)
      for (int i = 0; i < block.rows(); ++i)
        triplets_.emplace_back(r0 + i, c0 + j, block(i, j));
  }

  SparseMatrix build() {
    SparseMatrix m(layout_.size, layout_.size);
    m.setFromTriplets(triplets_.begin(), triplets_.end());
    m.makeCompressed();
    return m;
  }

private:
  const DofLayout &layout_;
  std::vector<Eigen::Triplet<Complex>> triplets_;
};

} // namespace

DgSystem assemble(const Mesh &mesh, const DegreeMap &degrees, const ProblemSpec &problem) {
  check_inputs(mesh, degrees, problem);
  DgSystem sys;
  sys.layout = DofLayout::of(degrees);
  sys.rhs = VectorXcd::Zero(sys.layout.size);
  TripletSink sink(sys.layout);
  const auto &k = problem.wavenumber;

  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const int p = degrees[t];
    ElementBasis eb(mesh, t, p);
    const int n = eb.size();
    const double jac = std::abs(eb.map().det);
    const double kmax = max_wavenumber_on_triangle(mesh, t, k);
    const double h = mesh.diameter(t);

    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(n, n);
    const auto &rule = checked_triangle_rule(volume_order(problem, p, kmax, h));
    for (int q = 0; q < rule.size(); ++q) {
      eb.eval_reference(rule.points[q]);
      const Vec2 x = eb.map().to_physical(rule.points[q]);
      const double w = rule.weights[q] * jac;
      const double kx = k(x);
      if (!(kx > 0.0))
        throw NonpositiveWavenumber("k = " + std::to_string(kx) + " in triangle " +
                                    std::to_string(t));
      local.noalias() += w * (eb.grad * eb.grad.transpose());
      local.noalias() -= (w * kx * kx) * (eb.phi * eb.phi.transpose());
    }
    sink.add(t, t, local.cast<Complex>());

    const auto &data_rule = checked_triangle_rule(problem.data_order(p, kmax, h));
    auto rhs = sys.rhs.segment(sys.layout.offset[t], n);
    for (int q = 0; q < data_rule.size(); ++q) {
      eb.eval_reference(data_rule.points[q]);
      const Vec2 x = eb.map().to_physical(data_rule.points[q]);
      rhs += (data_rule.weights[q] * jac * problem.source(x)) * eb.phi.cast<Complex>();
    }
  }

  const bool flip = problem.numerics.flip_jump_orientation;
  const double alpha = problem.alpha, beta = problem.beta, delta = problem.delta;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const EdgeFrame f = edge_frame(mesh, e, flip);
    const double h = f.length;
    const int pe = degrees.edge_degree(mesh, e);

    if (!f.is_boundary()) {
      ElementBasis side[2] = {ElementBasis(mesh, f.plus, degrees[f.plus]),
                              ElementBasis(mesh, f.minus, degrees[f.minus])};
      const int elem[2] = {f.plus, f.minus};
      const double sigma[2] = {1.0, -1.0};
      const int pmax = std::max(degrees[f.plus], degrees[f.minus]);
      const auto &rule = checked_edge_rule(2 * pmax + 2);
      Eigen::MatrixXd re[2][2], im[2][2];
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          re[a][b] = Eigen::MatrixXd::Zero(side[a].size(), side[b].size());
          im[a][b] = Eigen::MatrixXd::Zero(side[a].size(), side[b].size());
        }
      // -(1/i) b h/p and i a p^2/h are both purely imaginary.
      const double grad_pen = beta * h / pe;
      const double jump_pen = alpha * pe * pe / h;
      for (int q = 0; q < rule.size(); ++q) {
        const Vec2 x = f.point(rule.points[q].x());
        const double w = rule.weights[q] * h;
        VectorXd dn[2];
        for (int s = 0; s < 2; ++s) {
          side[s].eval(x);
          dn[s] = side[s].normal_derivatives(f.normal);
        }
        // rows: test side a, cols: trial side b.
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) {
            const auto &pa = side[a].phi, &pb = side[b].phi;
            const double sab = sigma[a] * sigma[b];
            re[a][b].noalias() -= (0.5 * w * sigma[b]) * (dn[a] * pb.transpose());
            re[a][b].noalias() -= (0.5 * w * sigma[a]) * (pa * dn[b].transpose());
            im[a][b].noalias() += (w * sab * grad_pen) * (dn[a] * dn[b].transpose());
            im[a][b].noalias() += (w * sab * jump_pen) * (pa * pb.transpose());
          }
      }
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          sink.add(elem[a], elem[b], re[a][b].cast<Complex>() + kI * im[a][b].cast<Complex>());
      continue;
    }

    const int t = f.plus;
    const int p = degrees[t];
    ElementBasis eb(mesh, t, p);
    const int n = eb.size();
    const double ke = max_wavenumber_on_edge(mesh, e, problem.wavenumber);
    Eigen::MatrixXd re = Eigen::MatrixXd::Zero(n, n), im = Eigen::MatrixXd::Zero(n, n);
    const auto &rule = checked_edge_rule(
        problem.constant_wavenumber ? 2 * p + 2 : problem.data_order(p, ke, h));
    for (int q = 0; q < rule.size(); ++q) {
      const Vec2 x = f.point(rule.points[q].x());
      const double w = rule.weights[q] * h;
      eb.eval(x);
      const VectorXd dn = eb.normal_derivatives(f.normal);
      const double kx = problem.wavenumber(x);
      const double c = delta * kx * h / pe;
      re.noalias() -= (w * c) * (dn * eb.phi.transpose() + eb.phi * dn.transpose());
      im.noalias() += (w * delta * h / pe) * (dn * dn.transpose());
      im.noalias() += (w * kx * (1.0 - c)) * (eb.phi * eb.phi.transpose());
    }
    sink.add(t, t, re.cast<Complex>() + kI * im.cast<Complex>());

    const auto &data_rule = checked_edge_rule(problem.data_order(p, ke, h));
    auto rhs = sys.rhs.segment(sys.layout.offset[t], n);
    for (int q = 0; q < data_rule.size(); ++q) {
      const Vec2 x = f.point(data_rule.points[q].x());
      const double w = data_rule.weights[q] * h;
      eb.eval(x);
      const VectorXd dn = eb.normal_derivatives(f.normal);
      const double c = delta * problem.wavenumber(x) * h / pe;
      const Complex g = problem.boundary(x, f.normal);
      rhs += (w * (1.0 - c) * g) * eb.phi.cast<Complex>();
      rhs += (w * kI * delta * h / double(pe) * g) * dn.cast<Complex>();
    }
  }

  sys.matrix = sink.build();
  return sys;
}

Eigen::VectorXcd apply_form(const Mesh &mesh, const DegreeMap &degrees,
                            const ProblemSpec &problem, const BrokenField &w) {
  check_inputs(mesh, degrees, problem);
  const DofLayout layout = DofLayout::of(degrees);
  VectorXcd out = VectorXcd::Zero(layout.size);
  const auto &k = problem.wavenumber;

  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const int p = degrees[t];
    ElementBasis eb(mesh, t, p);
    const double jac = std::abs(eb.map().det);
    const double kmax = max_wavenumber_on_triangle(mesh, t, k);
    const auto &rule = checked_triangle_rule(problem.data_order(p, kmax, mesh.diameter(t)));
    auto r = out.segment(layout.offset[t], eb.size());
    for (int q = 0; q < rule.size(); ++q) {
      eb.eval_reference(rule.points[q]);
      const Vec2 x = eb.map().to_physical(rule.points[q]);
      const double wq = rule.weights[q] * jac;
      const double kx = k(x);
      const CVec2 gw = w.gradient(t, x);
      const Complex vw = w.value(t, x);
      r += wq * (eb.grad.cast<Complex>() * gw - (kx * kx * vw) * eb.phi.cast<Complex>());
    }
  }

  const bool flip = problem.numerics.flip_jump_orientation;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const EdgeFrame f = edge_frame(mesh, e, flip);
    const double h = f.length;
    const int pe = degrees.edge_degree(mesh, e);
    const double ke = max_wavenumber_on_edge(mesh, e, k);
    const Vec2 &n = f.normal;

    if (!f.is_boundary()) {
      ElementBasis side[2] = {ElementBasis(mesh, f.plus, degrees[f.plus]),
                              ElementBasis(mesh, f.minus, degrees[f.minus])};
      const int elem[2] = {f.plus, f.minus};
      const double sigma[2] = {1.0, -1.0};
      const int pmax = std::max(degrees[f.plus], degrees[f.minus]);
      const auto &rule = checked_edge_rule(problem.data_order(pmax, ke, h));
      for (int q = 0; q < rule.size(); ++q) {
        const Vec2 x = f.point(rule.points[q].x());
        const double wq = rule.weights[q] * h;
        const Complex jump = w.value(f.plus, x) - w.value(f.minus, x);
        const CVec2 gp = w.gradient(f.plus, x), gm = w.gradient(f.minus, x);
        const Complex mean_dn = 0.5 * ((gp + gm).x() * n.x() + (gp + gm).y() * n.y());
        const Complex jump_dn = (gp - gm).x() * n.x() + (gp - gm).y() * n.y();
        for (int s = 0; s < 2; ++s) {
          side[s].eval(x);
          const VectorXd dn = side[s].normal_derivatives(n);
          auto r = out.segment(layout.offset[elem[s]], side[s].size());
          r += wq * (-0.5 * jump * dn.cast<Complex>() -
                     sigma[s] * mean_dn * side[s].phi.cast<Complex>() +
                     kI * problem.beta * h / double(pe) * sigma[s] * jump_dn *
                         dn.cast<Complex>() +
                     kI * problem.alpha * double(pe * pe) / h * sigma[s] * jump *
                         side[s].phi.cast<Complex>());
        }
      }
      continue;
    }

    const int t = f.plus;
    ElementBasis eb(mesh, t, degrees[t]);
    const auto &rule = checked_edge_rule(problem.data_order(degrees[t], ke, h));
    auto r = out.segment(layout.offset[t], eb.size());
    for (int q = 0; q < rule.size(); ++q) {
      const Vec2 x = f.point(rule.points[q].x());
      const double wq = rule.weights[q] * h;
      eb.eval(x);
      const VectorXd dn = eb.normal_derivatives(n);
      const double kx = k(x);
      const double c = problem.delta * kx * h / pe;
      const Complex vw = w.value(t, x);
      const CVec2 gw = w.gradient(t, x);
      const Complex wdn = gw.x() * n.x() + gw.y() * n.y();
      r += wq * (-c * vw * dn.cast<Complex>() - c * wdn * eb.phi.cast<Complex>() +
                 kI * problem.delta * h / double(pe) * wdn * dn.cast<Complex>() +
                 kI * kx * (1.0 - c) * vw * eb.phi.cast<Complex>());
    }
  }
  return out;
}

Solvability solvability_check(const Mesh &mesh, const DegreeMap &degrees,
                              const ProblemSpec &problem) {
  Solvability s;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (!mesh.edge(e).is_boundary())
      continue;
    const double k = max_wavenumber_on_edge(mesh, e, problem.wavenumber);
    s.value = std::max(s.value,
                       problem.delta * k * mesh.edge(e).length / degrees.edge_degree(mesh, e));
  }
  s.guaranteed = s.value < 0.5;
  return s;
}

SolveResult solve(const DgSystem &system) {
  SolveResult result;
  const int n = system.layout.size;
  const double bnorm = system.rhs.norm();
  if (bnorm == 0.0) {
    result.coefficients = VectorXcd::Zero(n);
    return result;
  }

  std::function<VectorXcd(const VectorXcd &)> apply_inverse;
  Eigen::FullPivLU<MatrixXcd> dense_lu;
  Eigen::UmfPackLU<SparseMatrix> sparse_lu;
  if (n < kDenseSolveLimit) {
    result.dense = true;
    dense_lu.compute(MatrixXcd(system.matrix));
    if (!dense_lu.isInvertible())
      throw SingularSystem("dense LU found a rank-deficient matrix (rank " +
                           std::to_string(dense_lu.rank()) + " of " + std::to_string(n) + ")");
    apply_inverse = [&](const VectorXcd &r) -> VectorXcd { return dense_lu.solve(r); };
  } else {
    sparse_lu.compute(system.matrix);
    if (sparse_lu.info() != Eigen::Success)
      throw SingularSystem("UMFPACK factorization failed");
    apply_inverse = [&](const VectorXcd &r) -> VectorXcd { return sparse_lu.solve(r); };
  }

  VectorXcd x = apply_inverse(system.rhs);
  VectorXcd residual = system.rhs - system.matrix * x;
  double rel = residual.norm() / bnorm;
  for (int it = 0; it < 3 && rel > 1e-12; ++it) {
    x += apply_inverse(residual);
    residual = system.rhs - system.matrix * x;
    rel = residual.norm() / bnorm;
  }
  if (!std::isfinite(rel))
    throw SingularSystem("solution is not finite");
  if (rel > 1e-10)
    throw ResidualTooLarge("relative residual " + std::to_string(rel));
  result.coefficients = std::move(x);
  result.relative_residual = rel;
  return result;
}

DgSolution solve(const Mesh &mesh, const DegreeMap &degrees, const ProblemSpec &problem) {
  const DgSystem sys = assemble(mesh, degrees, problem);
  return DgSolution(mesh, degrees, problem, solve(sys).coefficients);
}

double consistency_residual(const Mesh &mesh, const DegreeMap &degrees,
                            const ProblemSpec &problem, const BrokenField &exact) {
  const DgSystem sys = assemble(mesh, degrees, problem);
  const VectorXcd a = apply_form(mesh, degrees, problem, exact);
  const double scale = sys.rhs.cwiseAbs().maxCoeff();
  const double diff = (a - sys.rhs).cwiseAbs().maxCoeff();
  return diff / (scale > 0.0 ? scale : 1.0);
}

} // namespace hpdg
