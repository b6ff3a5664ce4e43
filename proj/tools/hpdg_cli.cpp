#include <iostream>

#include <CLI11.hpp>

#include "hpdg/benchmarks.hpp"
#include "run_command.hpp"

int main(int argc, char **argv) {
  CLI::App app{"Adaptive hp-dG solver for the Helmholtz equation with Robin boundary conditions"};
  app.require_subcommand(1);

  hpdg::cli::RunConfig cfg;
  CLI::App *run = app.add_subcommand("run", "Run a benchmark with uniform or adaptive refinement");
  run->add_option("--example", cfg.example, "Benchmark name")
      ->check(CLI::IsMember(hpdg::benchmark_names()))
      ->capture_default_str();
  run->add_option("--k", cfg.k, "Wavenumber")->capture_default_str();
  run->add_option("--k1", cfg.k1, "Wavenumber inside the disc (piecewise-k)")->capture_default_str();
  run->add_option("--k2", cfg.k2, "Wavenumber outside the disc (piecewise-k)")->capture_default_str();
  run->add_option("--variant", cfg.variant, "Boundary data of piecewise-k")
      ->check(CLI::IsMember({"g1", "g2"}))
      ->capture_default_str();
  run->add_option("--p", cfg.p, "Uniform polynomial degree")->capture_default_str();
  run->add_option("--refine", cfg.refine, "Refinement mode")
      ->check(CLI::IsMember({"uniform", "adaptive"}))
      ->capture_default_str();
  run->add_option("--theta", cfg.theta, "Doerfler threshold")->capture_default_str();
  run->add_option("--alpha", cfg.alpha, "Jump penalty")->capture_default_str();
  run->add_option("--beta", cfg.beta, "Gradient-jump penalty")->capture_default_str();
  run->add_option("--delta", cfg.delta, "Boundary penalty")->capture_default_str();
  run->add_option("--init-res", cfg.init_res,
                  "Initial mesh: squares per unit length (per side on the 2 pi boxes)")
      ->capture_default_str();
  run->add_option("--max-steps", cfg.max_steps, "Refinement steps (0: single solve)")
      ->capture_default_str();
  run->add_option("--max-dofs", cfg.max_dofs, "Do not solve beyond this many unknowns (0: off)")
      ->capture_default_str();
  run->add_option("--target-eta", cfg.target_eta, "Stop once eta_check falls below (0: off)")
      ->capture_default_str();
  run->add_option("--quad-order", cfg.quad_order, "Data quadrature order override (0: policy)")
      ->capture_default_str();
  run->add_option("--sweeps", cfg.sweeps, "Bisection sweeps of the marked set per adaptive step")
      ->capture_default_str();
  run->add_option("--uniform-sweeps", cfg.uniform_sweeps, "Bisection sweeps per uniform step")
      ->capture_default_str();
  run->add_option("--out", cfg.out, "Output directory")->capture_default_str();
  run->add_flag("--dump-meshes", cfg.dump_meshes, "Write the mesh of every step");
  run->add_flag("--dump-elements", cfg.dump_elements, "Write local estimators of every step");
  run->add_flag("!--no-timing", cfg.timing, "Write 0 in the seconds column");
  run->add_option("--seed", cfg.seed, "Seed for randomized parts")->capture_default_str();

  std::uint64_t verify_seed = 1;
  bool corrupt = false;
  CLI::App *verify = app.add_subcommand("verify", "Run the built-in property suites");
  verify->add_option("--seed", verify_seed, "Seed for the random instances")->capture_default_str();
  verify->add_flag("--corrupt-weights", corrupt, "Perturb quadrature weights (negative control)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run)
      return hpdg::cli::run(cfg, std::cout);
    return hpdg::cli::verify(verify_seed, corrupt, std::cout);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
