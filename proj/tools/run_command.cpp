#include "run_command.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "hpdg/adaptivity.hpp"
#include "hpdg/benchmarks.hpp"
#include "hpdg/errors.hpp"
#include "hpdg/mesh_io.hpp"
#include "hpdg/verification.hpp"

namespace hpdg::cli {

namespace fs = std::filesystem;

void validate(const RunConfig &cfg) {
  if (!(cfg.theta > 0.0 && cfg.theta <= 1.0))
    throw InvalidParameter("--theta must lie in (0, 1]");
  if (cfg.p < 1 || cfg.p > kMaxBasisDegree)
    throw InvalidParameter("--p must lie in [1, " + std::to_string(kMaxBasisDegree) + "]");
  if (!(cfg.alpha > 0.0 && cfg.beta > 0.0 && cfg.delta > 0.0))
    throw InvalidParameter("--alpha, --beta and --delta must be positive");
  if (cfg.refine != "uniform" && cfg.refine != "adaptive")
    throw InvalidParameter("--refine must be uniform or adaptive");
  if (cfg.init_res < 1)
    throw InvalidParameter("--init-res must be >= 1");
  if (cfg.max_steps < 0 || cfg.max_dofs < 0 || cfg.target_eta < 0.0 || cfg.quad_order < 0)
    throw InvalidParameter("stop criteria and --quad-order must be non-negative");
  if (cfg.sweeps < 1 || cfg.uniform_sweeps < 1)
    throw InvalidParameter("--sweeps and --uniform-sweeps must be >= 1");
}

namespace {

std::string numbered(const std::string &stem, int step, const char *ext) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "_%03d", step);
  return stem + buf + ext;
}

} // namespace

int run(const RunConfig &cfg, std::ostream &log) {
  validate(cfg);
  BenchmarkParams params;
  params.k = cfg.k;
  params.k1 = cfg.k1;
  params.k2 = cfg.k2;
  params.variant = cfg.variant;
  params.alpha = cfg.alpha;
  params.beta = cfg.beta;
  params.delta = cfg.delta;
  Benchmark bench = make_benchmark(cfg.example, params);
  bench.problem.numerics.data_order_override = cfg.quad_order;

  const Mesh mesh = bench.initial_mesh(cfg.init_res);
  const DegreeMap degrees = DegreeMap::uniform(mesh, cfg.p);

  AdaptOptions options;
  options.mode = cfg.refine == "uniform" ? RefineMode::uniform : RefineMode::adaptive;
  options.theta = cfg.theta;
  options.stop = {cfg.max_steps, cfg.max_dofs, cfg.target_eta};
  options.sweeps = cfg.sweeps;
  options.uniform_sweeps = cfg.uniform_sweeps;
  options.timing = cfg.timing;

  const fs::path out(cfg.out);
  fs::create_directories(out);

  log << std::setw(5) << "step" << std::setw(9) << "elems" << std::setw(10) << "dofs"
      << std::setw(12) << "hmin" << std::setw(13) << "eta_check" << std::setw(13) << "err_ht"
      << std::setw(9) << "mkhp" << '\n';
  auto observer = [&](const StepRecord &r, const DgSolution &sol, const EstimatorReport &rep) {
    log << std::setw(5) << r.step << std::setw(9) << r.nelems << std::setw(10) << r.ndofs
        << std::setw(12) << std::setprecision(4) << r.hmin << std::setw(13) << r.eta_check
        << std::setw(13) << r.err_ht << std::setw(9) << r.mkhp << '\n';
    if (cfg.dump_meshes)
      write_mesh((out / numbered("mesh", r.step, ".txt")).string(), sol.mesh());
    if (cfg.dump_elements) {
      std::ofstream f(out / numbered("elements", r.step, ".csv"));
      write_element_csv(f, rep);
    }
  };
  const RefinementHistory history =
      adapt(bench.problem, mesh, degrees, options, bench.exact, observer);

  {
    std::ofstream f(out / "history.csv");
    if (!f)
      throw Error("cannot write " + (out / "history.csv").string());
    write_history_csv(f, history);
  }

  const StepRecord &last = history.steps.back();
  log << "\nsummary (" << cfg.example << ", stopped by " << history.stop_reason << ")\n"
      << std::setprecision(6) << "  final DOFs          " << last.ndofs << '\n'
      << "  eta_check           " << last.eta_check << '\n';
  if (bench.exact)
    log << "  error ||.||_H;T     " << last.err_ht << '\n';
  log << "  M_kh/p              " << last.mkhp << '\n'
      << "  solvability d k h/p " << last.solvability
      << (last.solvable ? " (< 1/2, guaranteed)" : " (>= 1/2, not guaranteed)") << '\n'
      << "  history             " << (out / "history.csv").string() << '\n';
  for (const std::string &w : history.warnings)
    log << "warning: " << w << '\n';
  return 0;
}

int verify(std::uint64_t seed, bool corrupt_weights, std::ostream &log) {
  std::vector<SuiteResult> results;
  if (corrupt_weights) {
    results.push_back(verify_quadrature(kMaxQuadratureDegree, [](QuadratureRule &rule) {
      for (double &w : rule.weights)
        w *= 1.0 + 1e-6;
    }));
  } else {
    results = run_all_suites(seed);
  }
  bool ok = true;
  for (const SuiteResult &r : results) {
    print_suite(log, r);
    ok = ok && r.passed;
  }
  log << (ok ? "all suites passed" : "verification FAILED") << '\n';
  return ok ? 0 : 1;
}

} // namespace hpdg::cli
