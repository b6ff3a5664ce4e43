#include "hpdg/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "hpdg/quadrature.hpp"

namespace hpdg {

namespace {

double sq(double x) { return x * x; }

// L2 projection of data onto P_p of a triangle, evaluated back at the same
// quadrature points. Returns the projected values.
std::vector<Complex> project_on_triangle(int p, const QuadratureRule &rule,
                                         const std::vector<Complex> &data) {
  const auto &basis = LocalBasis::get(p);
  const int n = basis.size();
  Eigen::MatrixXd phi(n, rule.size());
  Eigen::VectorXd col(n);
  for (int q = 0; q < rule.size(); ++q) {
    basis.values(rule.points[q], col);
    phi.col(q) = col;
  }
  const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(rule.weights.data(), rule.size());
  const Eigen::MatrixXd gram = phi * w.asDiagonal() * phi.transpose();
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);
  for (int q = 0; q < rule.size(); ++q)
    rhs += (w[q] * data[q]) * phi.col(q).cast<Complex>();
  const Eigen::VectorXcd c = gram.ldlt().solve(rhs);
  std::vector<Complex> out(rule.size());
  for (int q = 0; q < rule.size(); ++q)
    out[q] = phi.col(q).cast<Complex>().dot(c);
  return out;
}

// Same on a segment, with monomials in (s - 1/2).
std::vector<Complex> project_on_segment(int p, const QuadratureRule &rule,
                                        const std::vector<Complex> &data) {
  const int n = p + 1;
  Eigen::MatrixXd phi(n, rule.size());
  for (int q = 0; q < rule.size(); ++q) {
    const double s = rule.points[q].x() - 0.5;
    double v = 1.0;
    for (int i = 0; i < n; ++i, v *= s)
      phi(i, q) = v;
  }
  const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(rule.weights.data(), rule.size());
  const Eigen::MatrixXd gram = phi * w.asDiagonal() * phi.transpose();
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);
  for (int q = 0; q < rule.size(); ++q)
    rhs += (w[q] * data[q]) * phi.col(q).cast<Complex>();
  const Eigen::VectorXcd c = gram.ldlt().solve(rhs);
  std::vector<Complex> out(rule.size());
  for (int q = 0; q < rule.size(); ++q)
    out[q] = phi.col(q).cast<Complex>().dot(c);
  return out;
}

struct VolumeTerms {
  double residual_sq = 0.0;  // (h/p)^2 ||Lap v + k^2 v + f||^2
  double projected_sq = 0.0; // same with f_T
  double osc_sq = 0.0;       // (h/p)^2 ||f - f_T||^2
};

VolumeTerms volume_terms(const Mesh &mesh, const DegreeMap &degrees,
                         const ProblemSpec &problem, const DgSolution *sol, int t) {
  const int p = degrees[t];
  const double h = mesh.diameter(t);
  const auto map = AffineMap::of(mesh, t);
  const double kmax = max_wavenumber_on_triangle(mesh, t, problem.wavenumber);
  const auto &rule = triangle_rule(problem.data_order(p, kmax, h));
  const double jac = std::abs(map.det);

  std::vector<Complex> f(rule.size());
  std::vector<Vec2> x(rule.size());
  for (int q = 0; q < rule.size(); ++q) {
    x[q] = map.to_physical(rule.points[q]);
    f[q] = problem.source(x[q]);
  }
  const std::vector<Complex> fp = project_on_triangle(p, rule, f);

  VolumeTerms out;
  for (int q = 0; q < rule.size(); ++q) {
    const double w = rule.weights[q] * jac;
    Complex lhs = 0.0;
    if (sol) {
      const double k = problem.wavenumber(x[q]);
      lhs = sol->laplacian(t, x[q]) + k * k * sol->value(t, x[q]);
    }
    out.residual_sq += w * std::norm(lhs + f[q]);
    out.projected_sq += w * std::norm(lhs + fp[q]);
    out.osc_sq += w * std::norm(f[q] - fp[q]);
  }
  const double s = sq(h / p);
  out.residual_sq *= s;
  out.projected_sq *= s;
  out.osc_sq *= s;
  return out;
}

struct InteriorTerms {
  double grad_jump_sq = 0.0; // || sqrt(b h/p) [[grad v]]_N ||_e^2
  double jump_sq = 0.0;      // || sqrt(a p^2/h) [[v]] ||_e^2
};

InteriorTerms interior_terms(const DgSolution &sol, int e) {
  const auto &mesh = sol.mesh();
  const auto &problem = sol.problem();
  const EdgeFrame f = edge_frame(mesh, e, problem.numerics.flip_jump_orientation);
  const int pe = sol.degrees().edge_degree(mesh, e);
  const int pmax = std::max(sol.degrees()[f.plus], sol.degrees()[f.minus]);
  const auto &rule = edge_rule(2 * pmax + 2);
  InteriorTerms out;
  for (int q = 0; q < rule.size(); ++q) {
    const Vec2 x = f.point(rule.points[q].x());
    const double w = rule.weights[q] * f.length;
    out.grad_jump_sq += w * std::norm(sol.normal_gradient_jump(f, x));
    out.jump_sq += w * std::norm(sol.jump(f, x));
  }
  out.grad_jump_sq *= problem.beta * f.length / pe;
  out.jump_sq *= problem.alpha * pe * pe / f.length;
  return out;
}

struct BoundaryTerms {
  double residual_sq = 0.0;  // || sqrt(h) (g - d_n v - i k v) ||_e^2
  double projected_sq = 0.0; // same with the projected g
  double osc_sq = 0.0;       // || sqrt(h) (g - g_e) ||_e^2
};

BoundaryTerms boundary_terms(const Mesh &mesh, const DegreeMap &degrees,
                             const ProblemSpec &problem, const DgSolution *sol, int e) {
  const EdgeFrame f = edge_frame(mesh, e);
  const int t = f.plus;
  const int p = degrees[t];
  const double ke = max_wavenumber_on_edge(mesh, e, problem.wavenumber);
  const auto &rule = edge_rule(problem.data_order(p, ke, f.length));
  std::vector<Complex> g(rule.size());
  std::vector<Vec2> x(rule.size());
  for (int q = 0; q < rule.size(); ++q) {
    x[q] = f.point(rule.points[q].x());
    g[q] = problem.boundary(x[q], f.normal);
  }
  const std::vector<Complex> gp = project_on_segment(p, rule, g);
  BoundaryTerms out;
  for (int q = 0; q < rule.size(); ++q) {
    const double w = rule.weights[q] * f.length;
    Complex robin = 0.0;
    if (sol) {
      const CVec2 grad = sol->gradient(t, x[q]);
      robin = grad.x() * f.normal.x() + grad.y() * f.normal.y() +
              kI * problem.wavenumber(x[q]) * sol->value(t, x[q]);
    }
    out.residual_sq += w * std::norm(g[q] - robin);
    out.projected_sq += w * std::norm(gp[q] - robin);
    out.osc_sq += w * std::norm(g[q] - gp[q]);
  }
  out.residual_sq *= f.length;
  out.projected_sq *= f.length;
  out.osc_sq *= f.length;
  return out;
}

bool touches_singularity(const Mesh &mesh, const ProblemSpec &problem, int t) {
  for (const auto &s : problem.singular_points)
    for (int v : mesh.triangle(t))
      if ((mesh.vertex(v) - s).norm() <= 1e-12 * std::max(1.0, s.norm()))
        return true;
  return false;
}

} // namespace

double internal_residual(const DgSolution &sol, int t) {
  return std::sqrt(volume_terms(sol.mesh(), sol.degrees(), sol.problem(), &sol, t).residual_sq);
}

double edge_residual(const DgSolution &sol, int t) {
  const auto &mesh = sol.mesh();
  double sum = 0.0;
  for (int e : mesh.triangle_edges(t)) {
    if (mesh.edge(e).is_boundary())
      sum += boundary_terms(mesh, sol.degrees(), sol.problem(), &sol, e).residual_sq;
    else
      sum += 0.5 * interior_terms(sol, e).grad_jump_sq;
  }
  return std::sqrt(sum);
}

double trace_residual(const DgSolution &sol, int t) {
  const auto &mesh = sol.mesh();
  double sum = 0.0;
  for (int e : mesh.triangle_edges(t))
    if (!mesh.edge(e).is_boundary())
      sum += interior_terms(sol, e).jump_sq;
  return std::sqrt(0.5 * sum);
}

double practical_estimator(const DgSolution &sol, int t) {
  const auto &mesh = sol.mesh();
  double sum = volume_terms(mesh, sol.degrees(), sol.problem(), &sol, t).residual_sq;
  for (int e : mesh.triangle_edges(t)) {
    if (mesh.edge(e).is_boundary())
      sum += boundary_terms(mesh, sol.degrees(), sol.problem(), &sol, e).residual_sq;
    else
      sum += 0.5 * sol.degrees()[t] * interior_terms(sol, e).grad_jump_sq;
  }
  return std::sqrt(sum);
}

double oscillations(const Mesh &mesh, const DegreeMap &degrees, const ProblemSpec &problem,
                    int t) {
  double sum = volume_terms(mesh, degrees, problem, nullptr, t).osc_sq;
  for (int e : mesh.triangle_edges(t))
    if (mesh.edge(e).is_boundary())
      sum += boundary_terms(mesh, degrees, problem, nullptr, e).osc_sq;
  return std::sqrt(sum);
}

EstimatorReport estimate(const DgSolution &sol) {
  const auto &mesh = sol.mesh();
  const auto &degrees = sol.degrees();
  const auto &problem = sol.problem();
  const int nt = mesh.num_triangles();

  std::vector<InteriorTerms> interior(mesh.num_edges());
  std::vector<BoundaryTerms> boundary(mesh.num_edges());
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (mesh.edge(e).is_boundary())
      boundary[e] = boundary_terms(mesh, degrees, problem, &sol, e);
    else
      interior[e] = interior_terms(sol, e);
  }

  EstimatorReport report;
  report.elements.resize(nt);
  double r2 = 0, e2 = 0, j2 = 0, tilde2 = 0, check2 = 0, osc2 = 0;
  for (int t = 0; t < nt; ++t) {
    const VolumeTerms vol = volume_terms(mesh, degrees, problem, &sol, t);
    double grad_jumps = 0, jumps = 0, bres = 0, bproj = 0, bosc = 0;
    for (int e : mesh.triangle_edges(t)) {
      if (mesh.edge(e).is_boundary()) {
        bres += boundary[e].residual_sq;
        bproj += boundary[e].projected_sq;
        bosc += boundary[e].osc_sq;
      } else {
        grad_jumps += interior[e].grad_jump_sq;
        jumps += interior[e].jump_sq;
      }
    }
    ElementEstimate &est = report.elements[t];
    const double eta_e_sq = 0.5 * grad_jumps + bres;
    const double eta_j_sq = 0.5 * jumps;
    est.eta_r = std::sqrt(vol.residual_sq);
    est.eta_e = std::sqrt(eta_e_sq);
    est.eta_j = std::sqrt(eta_j_sq);
    est.eta = std::sqrt(vol.residual_sq + eta_e_sq + eta_j_sq);
    est.eta_tilde = std::sqrt(vol.projected_sq + 0.5 * grad_jumps + bproj + eta_j_sq);
    est.eta_check = std::sqrt(vol.residual_sq + 0.5 * degrees[t] * grad_jumps + bres);
    est.osc = std::sqrt(vol.osc_sq + bosc);
    est.singular_data = touches_singularity(mesh, problem, t);

    r2 += vol.residual_sq;
    e2 += eta_e_sq;
    j2 += eta_j_sq;
    tilde2 += sq(est.eta_tilde);
    check2 += sq(est.eta_check);
    osc2 += sq(est.osc);
  }
  report.eta_r = std::sqrt(r2);
  report.eta_e = std::sqrt(e2);
  report.eta_j = std::sqrt(j2);
  report.eta = std::sqrt(r2 + e2 + j2);
  report.eta_tilde = std::sqrt(tilde2);
  report.eta_check = std::sqrt(check2);
  report.osc = std::sqrt(osc2);
  report.m_khp = mesh_functions(mesh, degrees, problem.wavenumber).m_khp;
  return report;
}

void write_element_csv(std::ostream &out, const EstimatorReport &report) {
  out << "id,eta_R,eta_E,eta_J,eta,eta_check,osc\n";
  out << std::setprecision(10);
  for (std::size_t t = 0; t < report.elements.size(); ++t) {
    const auto &e = report.elements[t];
    out << t << ',' << e.eta_r << ',' << e.eta_e << ',' << e.eta_j << ',' << e.eta << ','
        << e.eta_check << ',' << e.osc << '\n';
  }
}

} // namespace hpdg
