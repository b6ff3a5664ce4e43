#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hpdg/benchmarks.hpp"
#include "hpdg/estimator.hpp"
#include "hpdg/mesh.hpp"
#include "hpdg/problem.hpp"

namespace hpdg {

struct Marking {
  /// Marked elements in the order they were taken (largest indicator first).
  std::vector<int> elements;
  /// Set when every indicator vanishes; `elements` is then empty.
  bool all_zero = false;
};

/// Doerfler marking on squared indicators: the shortest prefix of the
/// elements sorted by value (descending, ties by index) whose mass reaches
/// theta times the total. Throws InvalidParameter for theta outside (0, 1] or
/// negative / non-finite values.
Marking doerfler_mark(std::span<const double> squared, double theta);

enum class RefineMode { uniform, adaptive };

struct StopCriteria {
  int max_steps = 10;
  /// Stop before solving a mesh with more unknowns than this (0 = no limit).
  long max_dofs = 0;
  /// Stop once eta_check drops below this (0 = disabled).
  double target_eta = 0.0;
};

struct AdaptOptions {
  RefineMode mode = RefineMode::adaptive;
  double theta = 0.7;
  StopCriteria stop;
  /// Bisection sweeps applied to the marked set per adaptive step.
  int sweeps = 1;
  /// Sweeps per uniform step; two halve every diameter.
  int uniform_sweeps = 2;
  /// Record wall time per step; zero is written otherwise.
  bool timing = true;
};

struct StepRecord {
  int step = 0;
  int nelems = 0;
  int ndofs = 0;
  double hmax = 0.0;
  double hmin = 0.0;
  double rho = 0.0;
  double mkhp = 0.0;
  double eta_check = 0.0;
  double eta = 0.0;
  double osc = 0.0;
  /// ||u - u_T||_{H;T}; NaN without an exact solution.
  double err_ht = 0.0;
  double solvability = 0.0;
  bool solvable = false;
  double seconds = 0.0;
  int marked = 0;
};

struct RefinementHistory {
  std::vector<StepRecord> steps;
  /// Diagnostics such as estimator stagnation.
  std::vector<std::string> warnings;
  std::string stop_reason;
};

/// Per-step observer, called after the estimate of each step.
using StepObserver = std::function<void(const StepRecord &, const DgSolution &,
                                        const EstimatorReport &)>;

/// SOLVE -> ESTIMATE -> MARK -> REFINE, starting from `mesh` / `degrees`.
/// Stops at max_steps refinements, before exceeding max_dofs, or when
/// eta_check reaches the target; solver errors propagate.
RefinementHistory adapt(const ProblemSpec &problem, const Mesh &mesh, const DegreeMap &degrees,
                        const AdaptOptions &options,
                        const std::optional<ManufacturedSolution> &exact = std::nullopt,
                        const StepObserver &observer = {});

inline constexpr const char *kHistoryHeader =
    "step,nelems,ndofs,hmax,hmin,rho,mkhp,eta_check,eta,osc,err_ht,solvable,seconds";

void write_history_csv(std::ostream &out, const RefinementHistory &history);

} // namespace hpdg
