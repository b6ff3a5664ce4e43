#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hpdg/benchmarks.hpp"
#include "hpdg/dg_system.hpp"
#include "hpdg/errors.hpp"

using namespace hpdg;

namespace {

// -Lap u - k^2 u by central differences.
Complex fd_helmholtz(const ManufacturedSolution &s, const Vec2 &x, double k, double h = 1e-4) {
  const Complex lap = (s.u(x + Vec2(h, 0)) + s.u(x - Vec2(h, 0)) + s.u(x + Vec2(0, h)) +
                       s.u(x - Vec2(0, h)) - 4.0 * s.u(x)) /
                      (h * h);
  return -lap - k * k * s.u(x);
}

CVec2 fd_gradient(const ManufacturedSolution &s, const Vec2 &x, double h = 1e-6) {
  return CVec2((s.u(x + Vec2(h, 0)) - s.u(x - Vec2(h, 0))) / (2 * h),
               (s.u(x + Vec2(0, h)) - s.u(x - Vec2(0, h))) / (2 * h));
}

} // namespace

TEST_SUITE("benchmarks") {

TEST_CASE("registry") {
  BenchmarkParams bp;
  for (const std::string &name : benchmark_names())
    CHECK(make_benchmark(name, bp).problem.name == name);
  CHECK_THROWS_AS(make_benchmark("nope", bp), InvalidParameter);
  bp.variant = "g3";
  CHECK_THROWS_AS(make_benchmark("piecewise-k", bp), InvalidParameter);
  bp.k = 0.0;
  CHECK_THROWS_AS(make_benchmark("plane-wave", bp), NonpositiveWavenumber);
}

TEST_CASE("Bessel function of order one half") {
  for (double x : {0.1, 1.0, 3.7, 12.0}) {
    CHECK(std::abs(bessel_j_half(x) - std::sqrt(2.0 / (std::numbers::pi * x)) * std::sin(x)) < 1e-15);
    const double fd = (bessel_j_half(x + 1e-6) - bessel_j_half(x - 1e-6)) / 2e-6;
    CHECK(std::abs(bessel_j_half_derivative(x) - fd) < 1e-7);
  }
}

TEST_CASE("manufactured data match finite differences") {
  BenchmarkParams bp;
  bp.k = 3.0;
  const Vec2 pts[] = {{0.3, 0.6}, {-0.4, 0.2}, {0.7, 0.9}};
  for (const char *name : {"plane-wave", "plane-wave-x", "lshape-bessel"}) {
    CAPTURE(name);
    const Benchmark b = make_benchmark(name, bp);
    REQUIRE(b.exact);
    for (const Vec2 &x : pts) {
      CHECK(std::abs(fd_helmholtz(*b.exact, x, bp.k) - b.problem.source(x)) < 1e-5);
      CHECK((fd_gradient(*b.exact, x) - b.exact->gradient(x)).norm() < 1e-7);
    }
  }
}

TEST_CASE("Robin data equal the trace of the exact solution") {
  const double tp = 2.0 * std::numbers::pi;
  struct Side {
    Vec2 x, n;
  };
  for (double k : {5.0, 5.5}) {
    BenchmarkParams bp;
    bp.k = k;
    const Benchmark b2 = plane_wave_x(bp);
    for (const Side &s : {Side{{0.0, 1.0}, {-1, 0}}, Side{{tp, 2.0}, {1, 0}},
                          Side{{1.3, 0.0}, {0, -1}}, Side{{4.0, tp}, {0, 1}}}) {
      const CVec2 g = b2.exact->gradient(s.x);
      const Complex trace = g.x() * s.n.x() + g.y() * s.n.y() + Complex(0, k) * b2.exact->u(s.x);
      CHECK(std::abs(b2.problem.boundary(s.x, s.n) - trace) < 1e-12);
    }
    CHECK(std::abs(b2.problem.boundary({0.0, 1.0}, {-1, 0})) == 0.0);
  }
  BenchmarkParams bp;
  bp.k = 5.0;
  CHECK(std::abs(plane_wave_x(bp).problem.boundary({tp, 1.0}, {1, 0}) - Complex(0, 10.0)) < 1e-12);
}

TEST_CASE("L-shape solution is undefined at the corner") {
  BenchmarkParams bp;
  const Benchmark b = lshape_bessel(bp);
  CHECK_THROWS_AS(b.exact->u(Vec2(0, 0)), EvaluationAtOrigin);
  CHECK_THROWS_AS(b.problem.source(Vec2(0, 0)), EvaluationAtOrigin);
  REQUIRE(b.problem.singular_points.size() == 1);
  // u vanishes nowhere special but is real and bounded on the domain.
  CHECK(std::abs(b.exact->u(Vec2(0.5, 0.5)).imag()) == 0.0);
}

TEST_CASE("piecewise wavenumber and boundary variants") {
  BenchmarkParams bp;
  bp.k1 = 10.0;
  bp.k2 = 1.0;
  const Benchmark b = piecewise_k(bp);
  const double pi = std::numbers::pi;
  CHECK(b.problem.wavenumber(Vec2(pi, pi)) == 10.0);
  CHECK(b.problem.wavenumber(Vec2(pi + 1.4, pi)) == 10.0);
  CHECK(b.problem.wavenumber(Vec2(pi + 1.6, pi)) == 1.0);
  CHECK_FALSE(b.problem.constant_wavenumber);
  CHECK(b.problem.boundary(Vec2(0, 1), Vec2(-1, 0)) == Complex(-1.0));
  CHECK(b.problem.boundary(Vec2(2 * pi, 1), Vec2(1, 0)) == Complex(0.0, 1.0));
  CHECK(b.problem.boundary(Vec2(1, 0), Vec2(0, -1)) == Complex(0.0));
  CHECK_FALSE(b.exact);
  bp.variant = "g2";
  const Benchmark b2 = piecewise_k(bp);
  CHECK(std::abs(b2.problem.boundary(Vec2(2 * pi, 1), Vec2(1, 0)) - Complex(0.0, 2.0)) < 1e-15);
}

TEST_CASE("coarse-mesh consistency of every benchmark with an exact solution") {
  BenchmarkParams bp;
  bp.k = 5.0;
  for (const char *name : {"plane-wave", "plane-wave-x"}) {
    CAPTURE(name);
    const Benchmark b = make_benchmark(name, bp);
    const Mesh m = b.initial_mesh(2);
    for (int p = 1; p <= 3; ++p)
      CHECK(consistency_residual(m, DegreeMap::uniform(m, p), b.problem, b.exact->as_field()) <= 1e-8);
  }
}

}
