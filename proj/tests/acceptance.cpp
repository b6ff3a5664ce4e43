// Acceptance suite: one PASS/FAIL line per primary criterion. With arguments,
// only the named criteria run.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "hpdg/adaptivity.hpp"
#include "hpdg/benchmarks.hpp"
#include "hpdg/dg_system.hpp"
#include "hpdg/mesh_io.hpp"
#include "hpdg/norms.hpp"
#include "hpdg/verification.hpp"
#include "oracle.hpp"

using namespace hpdg;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char *f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Outcome quadrature() {
  const SuiteResult r = verify_quadrature();
  const auto &rule = triangle_rule(4);
  double s = 0.0;
  for (int q = 0; q < rule.size(); ++q)
    s += rule.weights[q] * std::pow(rule.points[q].x() * rule.points[q].y(), 2);
  const double err = std::abs(s - 1.0 / 180.0) * 180.0;
  return {r.passed && err <= 1e-12,
          r.detail + " over degrees 0.." + std::to_string(kMaxQuadratureDegree) +
              "; x^2 y^2 relative error " + fmt("%.2e", err)};
}

Outcome assembly_oracle() {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g;
  double worst = 0.0;
  int cases = 0;
  for (const auto &[name, mesh] : fixtures::small_meshes()) {
    for (int variant = 0; variant < 4; ++variant) {
      const DegreeMap d = variant < 3 ? DegreeMap::uniform(mesh, variant + 1)
                                      : fixtures::random_degrees(mesh, rng);
      const double k = 1.0 + 4.0 * variant;
      const DgSystem sys = assemble(mesh, d, fixtures::constant_k(k));
      oracle::Params prm;
      prm.k = k;
      for (int field = 0; field < 20; ++field) {
        Eigen::VectorXcd c(sys.layout.size);
        for (int i = 0; i < c.size(); ++i)
          c[i] = Complex(g(rng), g(rng));
        const Eigen::VectorXcd ref = oracle::form(mesh, d, prm, oracle::discrete(mesh, d, c));
        const Eigen::VectorXcd got = sys.matrix * c;
        worst = std::max(worst, (got - ref).cwiseAbs().maxCoeff() / ref.cwiseAbs().maxCoeff());
        ++cases;
      }
    }
  }
  return {worst <= 1e-10, std::to_string(cases) + " fields on " +
                              std::to_string(fixtures::small_meshes().size()) +
                              " meshes (<= 8 cells, p <= 3), max relative deviation " +
                              fmt("%.2e", worst)};
}

Outcome hand_value() {
  const Mesh m = Mesh::build({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}});
  const DgSystem sys = assemble(m, DegreeMap::uniform(m, 1), fixtures::constant_k(1.0, 30, 1, 0.25));
  // phi_0 = sqrt(2) on the reference triangle, so 1 = phi_0 / sqrt(2).
  const Complex a = 0.5 * sys.matrix.coeff(0, 0);
  const Complex expected(-0.5, 1.0 + std::sqrt(2.0));
  const double err = std::abs(a - expected);
  std::ostringstream s;
  s << "a_T(1,1) = " << a.real() << " + " << a.imag() << "i, deviation " << fmt("%.2e", err);
  return {err <= 1e-12, s.str()};
}

Outcome consistency() {
  BenchmarkParams bp;
  bp.k = 5.0;
  const Benchmark b = plane_wave(bp);
  double worst = 0.0;
  for (int res : {1, 2})
    for (int p = 1; p <= 3; ++p) {
      const Mesh m = b.initial_mesh(res);
      worst = std::max(worst, consistency_residual(m, DegreeMap::uniform(m, p), b.problem,
                                                   b.exact->as_field()));
    }
  return {worst <= 1e-8, "Example 1, k=5, p=1..3, 2- and 8-cell meshes: max residual " +
                             fmt("%.2e", worst)};
}

Outcome polynomial_exactness() {
  double worst_err = 0.0, worst_eta = 0.0;
  for (double k : {1.0, 5.0, 10.0, 15.0, 20.0})
    for (int p = 1; p <= 3; ++p) {
      BenchmarkParams bp;
      bp.k = k;
      const Benchmark b = affine_solution(bp, 1.0, 0.0, 0.0);
      const Mesh m = b.initial_mesh(2);
      const DegreeMap d = DegreeMap::uniform(m, p);
      const DgSolution s = solve(m, d, b.problem);
      worst_err = std::max(worst_err, h_norm_error(s, b.exact->u, b.exact->gradient).total());
      const EstimatorReport r = estimate(s);
      worst_eta = std::max({worst_eta, r.eta, r.eta_check});
    }
  return {worst_err <= 1e-8 && worst_eta <= 1e-9,
          "u = x, k in {1,5,10,15,20}, p=1..3: max error " + fmt("%.2e", worst_err) +
              ", max(eta, eta_check) " + fmt("%.2e", worst_eta)};
}

RefinementHistory uniform_run(const Benchmark &b, int p, int steps, int res = 2) {
  const Mesh m = b.initial_mesh(res);
  AdaptOptions o;
  o.mode = RefineMode::uniform;
  o.stop.max_steps = steps;
  return adapt(b.problem, m, DegreeMap::uniform(m, p), o, b.exact);
}

Outcome convergence_rate() {
  BenchmarkParams bp;
  bp.k = 5.0;
  const RefinementHistory h = uniform_run(plane_wave(bp), 1, 6);
  const auto &s = h.steps;
  std::ostringstream d;
  d << "errors";
  for (const auto &r : s)
    d << " " << fmt("%.4g", r.err_ht);
  d << "; rates";
  for (std::size_t i = s.size() - 3; i < s.size(); ++i)
    d << " " << fmt("%.3f", std::log2(s[i - 1].err_ht / s[i].err_ht));
  const double rate = std::log2(s[s.size() - 4].err_ht / s.back().err_ht) / 3.0;
  d << "; mean over last 3 steps " << fmt("%.3f", rate) << " (required 1.0 +- 0.15)";
  return {std::abs(rate - 1.0) <= 0.15, d.str()};
}

// Index of the first uniform step with relative H;T error below 50%.
int first_resolved_step(double k, std::string &trace) {
  BenchmarkParams bp;
  bp.k = k;
  const Benchmark b = plane_wave(bp);
  const Mesh m = b.initial_mesh(2);
  AdaptOptions o;
  o.mode = RefineMode::uniform;
  o.stop.max_steps = 8;
  o.stop.max_dofs = 400000;
  int found = -1;
  std::ostringstream t;
  t << "k=" << k << ":";
  adapt(b.problem, m, DegreeMap::uniform(m, 1), o, b.exact,
        [&](const StepRecord &r, const DgSolution &s, const EstimatorReport &) {
          const double rel = r.err_ht / h_norm(s, b.exact->u, b.exact->gradient).total();
          t << " " << fmt("%.3f", rel);
          if (found < 0 && rel < 0.5)
            found = r.step;
        });
  trace = t.str();
  return found;
}

Outcome pollution() {
  std::string t5, t20;
  const int s5 = first_resolved_step(5.0, t5);
  const int s20 = first_resolved_step(20.0, t20);
  return {s5 >= 0 && s20 > s5, "first step below 50%: k=5 -> " + std::to_string(s5) +
                                   ", k=20 -> " + std::to_string(s20) + " (" + t5 + "; " + t20 +
                                   ")"};
}

Outcome ratio() {
  BenchmarkParams bp;
  bp.k = 5.0;
  const Benchmark b = plane_wave(bp);
  bool ok = true;
  int counted = 0;
  double lo = INFINITY, hi = 0.0;
  for (auto [p, steps] : {std::pair{1, 6}, std::pair{3, 4}}) {
    for (const StepRecord &r : uniform_run(b, p, steps).steps) {
      if (r.mkhp > 0.5)
        continue;
      const double q = r.err_ht / r.eta_check;
      lo = std::min(lo, q);
      hi = std::max(hi, q);
      ok = ok && q >= 1e-2 && q <= 1e2;
      ++counted;
    }
  }
  return {ok && counted > 0, std::to_string(counted) + " steps with kh/p <= 0.5, err/eta_check in [" +
                                 fmt("%.3f", lo) + ", " + fmt("%.3f", hi) + "]"};
}

Outcome marking() {
  const SuiteResult r = verify_marking(200, 2024);
  return {r.passed, std::to_string(r.checks - r.failures) + "/" + std::to_string(r.checks) +
                        " instances match the exhaustive minimum"};
}

Outcome refinement_soundness() {
  BenchmarkParams bp;
  bp.k = 10.0;
  const Benchmark b = lshape_bessel(bp);
  const Mesh m = b.initial_mesh(2);
  const double rho0 = shape_regularity(m);
  const double area = m.total_area();
  AdaptOptions o;
  o.stop.max_steps = 20;
  bool conforming = true;
  double rho_max = 0.0;
  std::string why;
  const RefinementHistory h =
      adapt(b.problem, m, DegreeMap::uniform(m, 1), o, std::nullopt,
            [&](const StepRecord &r, const DgSolution &s, const EstimatorReport &) {
              std::string w;
              if (!is_conforming(s.mesh(), area, &w)) {
                conforming = false;
                why = "step " + std::to_string(r.step) + ": " + w;
              }
              rho_max = std::max(rho_max, r.rho);
            });
  const auto &f = h.steps.front(), &l = h.steps.back();
  const double grading = (f.hmin / l.hmin) / (f.hmax / l.hmax);
  std::ostringstream d;
  d << h.steps.size() - 1 << " steps, " << l.nelems << " cells, conforming "
    << (conforming ? "yes" : "no " + why) << ", rho max " << fmt("%.3f", rho_max) << " (initial "
    << fmt("%.3f", rho0) << "), h_min " << fmt("%.3g", f.hmin) << " -> " << fmt("%.3g", l.hmin) << " ("
    << fmt("%.0f", f.hmin / l.hmin) << "x), h_max " << fmt("%.3g", f.hmax) << " -> " << fmt("%.3g", l.hmax) << " ("
    << fmt("%.1f", f.hmax / l.hmax) << "x), grading ratio " << fmt("%.3g", grading)
    << " (required >= 1e3)";
  return {conforming && rho_max <= 2.0 * rho0 && grading >= 1e3 && h.steps.size() == 21, d.str()};
}

Outcome adaptive_vs_uniform() {
  BenchmarkParams bp;
  bp.k = 5.0;
  const Benchmark b = lshape_bessel(bp);
  const Mesh m = b.initial_mesh(2);
  AdaptOptions o;
  o.stop.max_steps = 100;
  o.stop.max_dofs = 20000;
  const RefinementHistory ad = adapt(b.problem, m, DegreeMap::uniform(m, 2), o, b.exact);
  const StepRecord &a = ad.steps.back();
  AdaptOptions u = o;
  u.mode = RefineMode::uniform;
  u.stop.max_dofs = 0;
  // Uniform steps until the DOF count passes the adaptive one.
  std::vector<StepRecord> us;
  for (int steps = 1;; ++steps) {
    u.stop.max_steps = steps;
    us = adapt(b.problem, m, DegreeMap::uniform(m, 2), u, b.exact).steps;
    if (us.back().ndofs >= a.ndofs || steps > 8)
      break;
  }
  std::size_t j = 1;
  while (j + 1 < us.size() && us[j].ndofs < a.ndofs)
    ++j;
  const double t = std::log(static_cast<double>(a.ndofs) / us[j - 1].ndofs) /
                   std::log(static_cast<double>(us[j].ndofs) / us[j - 1].ndofs);
  const double uniform_err =
      std::exp(std::log(us[j - 1].err_ht) + t * (std::log(us[j].err_ht) - std::log(us[j - 1].err_ht)));
  const double ratio = a.err_ht / uniform_err;
  std::ostringstream d;
  d << "adaptive " << a.ndofs << " DOFs error " << fmt("%.4g", a.err_ht) << ", uniform interpolated "
    << fmt("%.4g", uniform_err) << " (between " << us[j - 1].ndofs << " and " << us[j].ndofs
    << " DOFs), ratio " << fmt("%.3f", ratio);
  return {ratio <= 0.5 && a.ndofs <= 20000, d.str()};
}

Outcome solvability() {
  bool ok = true;
  std::ostringstream d;
  for (auto [name, k] : {std::pair{"plane-wave", 20.0}, std::pair{"lshape-bessel", 10.0}}) {
    BenchmarkParams bp;
    bp.k = k;
    const Benchmark b = make_benchmark(name, bp);
    const Mesh m = b.initial_mesh(1);
    AdaptOptions o;
    o.mode = RefineMode::uniform;
    o.stop.max_steps = 6;
    RefinementHistory h;
    try {
      h = adapt(b.problem, m, DegreeMap::uniform(m, 1), o, b.exact);
    } catch (const std::exception &e) {
      return {false, std::string(name) + ": " + e.what()};
    }
    d << name << " k=" << k << ":";
    for (std::size_t i = 0; i < h.steps.size(); ++i) {
      d << " " << fmt("%.4g", h.steps[i].solvability);
      if (i > 0)
        ok = ok && std::abs(h.steps[i].solvability - 0.5 * h.steps[i - 1].solvability) <=
                       1e-12 * h.steps[i - 1].solvability;
      ok = ok && std::isfinite(h.steps[i].err_ht);
    }
    d << "; ";
  }
  d << "every step solved";
  return {ok, d.str()};
}

Outcome example4() {
  BenchmarkParams bp;
  bp.k1 = 10.0;
  bp.k2 = 1.0;
  bp.variant = "g1";
  const Benchmark b = piecewise_k(bp);
  const Mesh m = b.initial_mesh(2);
  AdaptOptions o;
  o.stop.max_steps = 15;
  double med_in = 0.0, med_out = 0.0;
  const Vec2 center(std::numbers::pi, std::numbers::pi);
  const RefinementHistory h =
      adapt(b.problem, m, DegreeMap::uniform(m, 1), o, std::nullopt,
            [&](const StepRecord &r, const DgSolution &s, const EstimatorReport &) {
              if (r.step != 15)
                return;
              std::vector<double> in, out;
              for (int t = 0; t < s.mesh().num_triangles(); ++t)
                ((s.mesh().centroid(t) - center).norm() < 1.5 ? in : out)
                    .push_back(s.mesh().diameter(t));
              auto median = [](std::vector<double> v) {
                std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
                return v[v.size() / 2];
              };
              med_in = median(in);
              med_out = median(out);
            });
  bool decreasing = h.steps.size() == 16;
  std::ostringstream d;
  d << "eta_check over last 6 steps:";
  for (std::size_t i = h.steps.size() - 6; i < h.steps.size(); ++i) {
    d << " " << fmt("%.4g", h.steps[i].eta_check);
    if (i > h.steps.size() - 6)
      decreasing = decreasing && h.steps[i].eta_check < h.steps[i - 1].eta_check;
  }
  d << "; median h inside " << fmt("%.4g", med_in) << ", outside " << fmt("%.4g", med_out)
    << " (ratio " << fmt("%.2f", med_out / med_in) << "), " << h.steps.back().nelems << " cells";
  return {decreasing && med_out >= 2.0 * med_in, d.str()};
}

const std::vector<std::pair<std::string, std::function<Outcome()>>> &criteria() {
  static const std::vector<std::pair<std::string, std::function<Outcome()>>> list = {
      {"quadrature", quadrature},
      {"assembly_oracle", assembly_oracle},
      {"hand_value", hand_value},
      {"consistency", consistency},
      {"polynomial_exactness", polynomial_exactness},
      {"convergence_rate", convergence_rate},
      {"pollution", pollution},
      {"ratio", ratio},
      {"marking", marking},
      {"refinement_soundness", refinement_soundness},
      {"adaptive_vs_uniform", adaptive_vs_uniform},
      {"solvability", solvability},
      {"example4", example4},
  };
  return list;
}

} // namespace

int main(int argc, char **argv) {
  std::vector<std::string> wanted(argv + 1, argv + argc);
  bool all_passed = true;
  int ran = 0;
  for (const auto &[name, check] : criteria()) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), name) == wanted.end())
      continue;
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << name << ": " << o.detail << " ["
              << fmt("%.1f", secs) << " s]" << std::endl;
    all_passed = all_passed && o.pass;
  }
  if (ran == 0) {
    std::cerr << "no criterion matched\n";
    return 2;
  }
  return all_passed ? 0 : 1;
}
