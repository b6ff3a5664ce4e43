#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace hpdg::cli {

struct RunConfig {
  std::string example = "plane-wave";
  double k = 5.0;
  double k1 = 10.0;
  double k2 = 1.0;
  std::string variant = "g1";
  int p = 1;
  std::string refine = "adaptive";
  double theta = 0.7;
  double alpha = 30.0;
  double beta = 1.0;
  double delta = 0.25;
  int init_res = 2;
  int max_steps = 10;
  long max_dofs = 0;
  double target_eta = 0.0;
  int quad_order = 0;
  int sweeps = 1;
  int uniform_sweeps = 2;
  std::string out = "out";
  bool dump_meshes = false;
  bool dump_elements = false;
  bool timing = true;
  std::uint64_t seed = 1;
};

/// Throws hpdg::InvalidParameter for out-of-range settings.
void validate(const RunConfig &cfg);

/// Runs the experiment and writes <out>/history.csv (plus mesh_NNN.txt and
/// elements_NNN.csv when requested). Returns the process exit status.
int run(const RunConfig &cfg, std::ostream &log);

/// Runs all verification suites; nonzero when any fails. `corrupt_weights`
/// perturbs every quadrature weight set before checking (negative control).
int verify(std::uint64_t seed, bool corrupt_weights, std::ostream &log);

} // namespace hpdg::cli
