#include "hpdg/adaptivity.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>

#include "hpdg/dg_system.hpp"
#include "hpdg/errors.hpp"
#include "hpdg/norms.hpp"
#include "hpdg/refine.hpp"

namespace hpdg {

Marking doerfler_mark(std::span<const double> squared, double theta) {
  if (!(theta > 0.0 && theta <= 1.0))
    throw InvalidParameter("theta must lie in (0, 1]");
  double total = 0.0;
  for (double v : squared) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw InvalidParameter("marking indicators must be finite and non-negative");
    total += v;
  }
  Marking result;
  if (total == 0.0) {
    result.all_zero = true;
    return result;
  }
  std::vector<int> order(squared.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return squared[a] > squared[b]; });
  // Summing in sorted order and comparing against the same-order total keeps
  // theta = 1 from missing the last element by rounding.
  double sorted_total = 0.0;
  for (int i : order)
    sorted_total += squared[i];
  const double goal = theta * sorted_total;
  double mass = 0.0;
  for (int i : order) {
    if (squared[i] == 0.0)
      break;
    result.elements.push_back(i);
    mass += squared[i];
    if (mass >= goal)
      break;
  }
  return result;
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

} // namespace

RefinementHistory adapt(const ProblemSpec &problem, const Mesh &initial_mesh,
                        const DegreeMap &initial_degrees, const AdaptOptions &options,
                        const std::optional<ManufacturedSolution> &exact,
                        const StepObserver &observer) {
  problem.validate();
  if (!(options.theta > 0.0 && options.theta <= 1.0))
    throw InvalidParameter("theta must lie in (0, 1]");
  if (options.sweeps < 1 || options.uniform_sweeps < 1)
    throw InvalidParameter("at least one bisection sweep per step is required");
  if (options.stop.max_steps < 0)
    throw InvalidParameter("max_steps must be non-negative");
  if (initial_degrees.min_degree() < 1)
    throw InvalidParameter("polynomial degrees must be >= 1");

  RefinementHistory history;
  Mesh mesh = initial_mesh;
  DegreeMap degrees = initial_degrees;
  int stagnant = 0;
  bool stagnation_reported = false;

  for (int step = 0;; ++step) {
    const auto start = std::chrono::steady_clock::now();
    const int ndofs = degrees.num_dofs();
    if (options.stop.max_dofs > 0 && ndofs > options.stop.max_dofs && step > 0) {
      history.stop_reason = "max_dofs";
      break;
    }

    const DgSystem system = assemble(mesh, degrees, problem);
    const SolveResult solved = solve(system);
    const DgSolution solution(mesh, degrees, problem, solved.coefficients);
    const EstimatorReport report = estimate(solution);

    StepRecord rec;
    rec.step = step;
    rec.nelems = mesh.num_triangles();
    rec.ndofs = ndofs;
    rec.hmax = mesh.h_max_edges();
    rec.hmin = mesh.h_min_edges();
    rec.rho = shape_regularity(mesh);
    rec.mkhp = report.m_khp;
    rec.eta_check = report.eta_check;
    rec.eta = report.eta;
    rec.osc = report.osc;
    rec.err_ht = exact ? h_norm_error(solution, exact->u, exact->gradient).total()
                       : std::numeric_limits<double>::quiet_NaN();
    const Solvability solv = solvability_check(mesh, degrees, problem);
    rec.solvability = solv.value;
    rec.solvable = solv.guaranteed;

    if (!history.steps.empty()) {
      if (rec.eta_check >= history.steps.back().eta_check)
        ++stagnant;
      else
        stagnant = 0;
      if (stagnant > 5 && !stagnation_reported) {
        history.warnings.push_back("NonDecreasingEstimatorWarning: eta_check has not decreased for " +
                                   std::to_string(stagnant) + " steps (step " +
                                   std::to_string(step) + ")");
        stagnation_reported = true;
      }
    }

    const bool last = step >= options.stop.max_steps ||
                      (options.stop.target_eta > 0.0 && rec.eta_check <= options.stop.target_eta);
    std::vector<int> marked;
    if (!last) {
      if (options.mode == RefineMode::uniform) {
        marked.resize(mesh.num_triangles());
        std::iota(marked.begin(), marked.end(), 0);
      } else {
        std::vector<double> squared(report.elements.size());
        for (size_t t = 0; t < squared.size(); ++t)
          squared[t] = report.elements[t].eta_check * report.elements[t].eta_check;
        marked = doerfler_mark(squared, options.theta).elements;
      }
    }
    rec.marked = static_cast<int>(marked.size());
    if (options.timing)
      rec.seconds = seconds_since(start);
    history.steps.push_back(rec);
    if (observer)
      observer(rec, solution, report);

    if (last) {
      history.stop_reason = step >= options.stop.max_steps ? "max_steps" : "target_eta";
      break;
    }
    if (marked.empty()) {
      history.stop_reason = "zero_estimator";
      break;
    }
    const int sweeps =
        options.mode == RefineMode::uniform ? options.uniform_sweeps : options.sweeps;
    RefineResult refined = refine_sweeps(mesh, degrees, marked, sweeps);
    mesh = std::move(refined.mesh);
    degrees = std::move(refined.degrees);
  }
  return history;
}

void write_history_csv(std::ostream &out, const RefinementHistory &history) {
  out << kHistoryHeader << '\n';
  auto num = [&out](double v) {
    if (std::isnan(v))
      out << "nan";
    else
      out << v;
  };
  const auto flags = out.flags();
  const auto precision = out.precision();
  out.precision(12);
  for (const StepRecord &r : history.steps) {
    out << r.step << ',' << r.nelems << ',' << r.ndofs << ',';
    for (double v : {r.hmax, r.hmin, r.rho, r.mkhp, r.eta_check, r.eta, r.osc, r.err_ht}) {
      num(v);
      out << ',';
    }
    out << (r.solvable ? 1 : 0) << ',';
    num(r.seconds);
    out << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

} // namespace hpdg
