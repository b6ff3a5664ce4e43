#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hpdg/mesh.hpp"
#include "hpdg/problem.hpp"
#include "hpdg/solution.hpp"

namespace hpdg {

/// Closed-form solution with gradient and Laplacian.
struct ManufacturedSolution {
  ComplexField u;
  VectorField gradient;
  ComplexField laplacian;

  BrokenField as_field() const;
};

/// Problem with f = -Lap u - k^2 u and g = d_n u + i k u for constant k.
ProblemSpec manufactured_problem(std::string name, const ManufacturedSolution &exact, double k);

struct Benchmark {
  ProblemSpec problem;
  std::optional<ManufacturedSolution> exact;
  /// Initial mesh generator; the argument is the initial resolution.
  std::function<Mesh(int)> initial_mesh;
};

/// Shared benchmark parameters.
struct BenchmarkParams {
  double k = 5.0;
  double k1 = 10.0;
  double k2 = 1.0;
  /// "g1" or "g2" for the piecewise-k benchmark.
  std::string variant = "g1";
  double alpha = 30.0;
  double beta = 1.0;
  double delta = 0.25;
};

/// Unit square, u = exp(i k (x + y)).
Benchmark plane_wave(const BenchmarkParams &params);
/// (0, 2 pi)^2, u = exp(i k x), f = 0, g = 0 / 2ik e^{2 pi i k} / ik e^{ikx} on
/// the left / right / horizontal sides.
Benchmark plane_wave_x(const BenchmarkParams &params);
/// L-shape with reentrant corner at the origin, u = J_{1/2}(k r).
Benchmark lshape_bessel(const BenchmarkParams &params);
/// (0, 2 pi)^2 with k = k1 in the disc of radius 3/2 about (pi, pi) and k2
/// outside, f = 0, boundary data g1 or g2. No exact solution.
Benchmark piecewise_k(const BenchmarkParams &params);
/// Unit square, u = a x + b y + c, f = -k^2 u.
Benchmark affine_solution(const BenchmarkParams &params, Complex a, Complex b, Complex c);

/// Registry: plane-wave | plane-wave-x | lshape-bessel | piecewise-k.
/// Throws InvalidParameter for unknown names.
Benchmark make_benchmark(const std::string &name, const BenchmarkParams &params);
std::vector<std::string> benchmark_names();

/// J_{1/2}(x) = sqrt(2 / (pi x)) sin x.
double bessel_j_half(double x);
/// d/dx J_{1/2}(x).
double bessel_j_half_derivative(double x);

} // namespace hpdg
