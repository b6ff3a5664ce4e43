#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "hpdg/benchmarks.hpp"
#include "hpdg/dg_system.hpp"
#include "hpdg/errors.hpp"
#include "hpdg/norms.hpp"
#include "oracle.hpp"

using namespace hpdg;

namespace {

Eigen::VectorXcd random_vector(int n, std::mt19937_64 &rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd c(n);
  for (int i = 0; i < n; ++i)
    c[i] = Complex(g(rng), g(rng));
  return c;
}

double rel_diff(const Eigen::VectorXcd &a, const Eigen::VectorXcd &b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1e-300, b.cwiseAbs().maxCoeff());
}

} // namespace

TEST_SUITE("dg_system") {

TEST_CASE("hand value on the reference triangle") {
  const Mesh m = Mesh::build({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}});
  const DegreeMap d = DegreeMap::uniform(m, 1);
  const DgSystem sys = assemble(m, d, fixtures::constant_k(1.0));
  // phi_0 = sqrt(2) on the reference triangle, so 1 = phi_0 / sqrt(2).
  const Complex a11 = 0.5 * sys.matrix.coeff(0, 0);
  const Complex expected(-0.5, 1.0 + std::sqrt(2.0));
  CHECK(std::abs(a11 - expected) < 1e-12);
}

TEST_CASE("matrix agrees with the independent form on small meshes") {
  std::mt19937_64 rng(5);
  for (const auto &[name, mesh] : fixtures::small_meshes()) {
    CAPTURE(name);
    for (double k : {1.0, 7.5}) {
      const DegreeMap d = fixtures::random_degrees(mesh, rng);
      const ProblemSpec prob = fixtures::constant_k(k);
      const DgSystem sys = assemble(mesh, d, prob);
      oracle::Params prm;
      prm.k = k;
      for (int trial = 0; trial < 5; ++trial) {
        const Eigen::VectorXcd c = random_vector(sys.layout.size, rng);
        const Eigen::VectorXcd expected = oracle::form(mesh, d, prm, oracle::discrete(mesh, d, c));
        CHECK(rel_diff(sys.matrix * c, expected) < 1e-10);
      }
    }
  }
}

TEST_CASE("jump orientation does not change the system") {
  const Mesh m = lshape_mesh(1);
  std::mt19937_64 rng(9);
  const DegreeMap d = fixtures::random_degrees(m, rng);
  ProblemSpec prob = fixtures::constant_k(3.0);
  const DgSystem a = assemble(m, d, prob);
  prob.numerics.flip_jump_orientation = true;
  const DgSystem b = assemble(m, d, prob);
  CHECK((Eigen::MatrixXcd(a.matrix) - Eigen::MatrixXcd(b.matrix)).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("load vector agrees with the independent transcription") {
  BenchmarkParams bp;
  bp.k = 4.0;
  const Benchmark b = plane_wave(bp);
  const Mesh m = unit_square_mesh(2);
  std::mt19937_64 rng(2);
  const DegreeMap d = fixtures::random_degrees(m, rng);
  const DgSystem sys = assemble(m, d, b.problem);
  oracle::Params prm;
  prm.k = bp.k;
  const Eigen::VectorXcd expected = oracle::load(m, d, prm, b.problem.source, b.problem.boundary, 40);
  CHECK(rel_diff(sys.rhs, expected) < 1e-12);
}

TEST_CASE("apply_form matches the matrix on discrete fields") {
  const Mesh m = unit_square_mesh(2);
  std::mt19937_64 rng(4);
  const DegreeMap d = fixtures::random_degrees(m, rng);
  const ProblemSpec prob = fixtures::constant_k(2.0);
  const DgSystem sys = assemble(m, d, prob);
  const Eigen::VectorXcd c = random_vector(sys.layout.size, rng);
  const DgSolution field(m, d, prob, c);
  CHECK(rel_diff(apply_form(m, d, prob, field.as_field()), sys.matrix * c) < 1e-11);
}

TEST_CASE("plane wave consistency on coarse meshes") {
  BenchmarkParams bp;
  bp.k = 5.0;
  const Benchmark b = plane_wave(bp);
  for (int res : {1, 2})
    for (int p = 1; p <= 3; ++p) {
      const Mesh m = b.initial_mesh(res);
      CHECK(consistency_residual(m, DegreeMap::uniform(m, p), b.problem, b.exact->as_field()) <=
            1e-8);
    }
}

TEST_CASE("zero data gives the zero solution") {
  const Mesh m = unit_square_mesh(3);
  const DegreeMap d = DegreeMap::uniform(m, 2);
  const ProblemSpec prob = fixtures::constant_k(2.0);
  const DgSolution s = solve(m, d, prob);
  CHECK(s.coefficients().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sparse and dense solves agree") {
  BenchmarkParams bp;
  bp.k = 3.0;
  const Benchmark b = plane_wave(bp);
  const Mesh m = unit_square_mesh(6);
  const DegreeMap d = DegreeMap::uniform(m, 2);
  const DgSystem sys = assemble(m, d, b.problem);
  REQUIRE(sys.layout.size >= kDenseSolveLimit);
  const SolveResult sparse = solve(sys);
  CHECK_FALSE(sparse.dense);
  const Eigen::VectorXcd dense = Eigen::MatrixXcd(sys.matrix).fullPivLu().solve(sys.rhs);
  CHECK(rel_diff(sparse.coefficients, dense) < 1e-9);
  CHECK(sparse.relative_residual < 1e-10);
}

TEST_CASE("affine solution is reproduced") {
  BenchmarkParams bp;
  bp.k = 7.0;
  const Benchmark b = affine_solution(bp, Complex(1.0, -2.0), Complex(0.5, 0.0), Complex(0.0, 3.0));
  const Mesh m = unit_square_mesh(2);
  const DegreeMap d = DegreeMap::uniform(m, 1);
  const DgSolution s = solve(m, d, b.problem);
  CHECK(h_norm_error(s, b.exact->u, b.exact->gradient).total() < 1e-9);
}

TEST_CASE("solvability value halves under uniform refinement") {
  const ProblemSpec prob = fixtures::constant_k(10.0);
  double last = 0.0;
  for (int n : {1, 2, 4, 8}) {
    const Mesh m = unit_square_mesh(n);
    const Solvability s = solvability_check(m, DegreeMap::uniform(m, 1), prob);
    CHECK(std::abs(s.value - 0.25 * 10.0 / n) < 1e-12);
    CHECK(s.guaranteed == (s.value < 0.5));
    if (last > 0.0)
      CHECK(std::abs(s.value - 0.5 * last) < 1e-12);
    last = s.value;
  }
}

TEST_CASE("errors") {
  const Mesh m = unit_square_mesh(1);
  ProblemSpec bad = fixtures::constant_k(1.0);
  bad.alpha = -1.0;
  CHECK_THROWS_AS(assemble(m, DegreeMap::uniform(m, 1), bad), InvalidParameter);
  CHECK_THROWS_AS(assemble(m, DegreeMap::uniform(m, 0), fixtures::constant_k(1.0)),
                  InvalidParameter);
  CHECK_THROWS_AS(assemble(m, DegreeMap::uniform(m, 1), fixtures::constant_k(-2.0)),
                  NonpositiveWavenumber);
}

}
