#include "hpdg/benchmarks.hpp"

#include <cmath>
#include <numbers>

#include "hpdg/errors.hpp"
#include "hpdg/mesh_io.hpp"

namespace hpdg {

namespace {

constexpr double kPi = std::numbers::pi;

void apply_constants(ProblemSpec &problem, const BenchmarkParams &params) {
  problem.alpha = params.alpha;
  problem.beta = params.beta;
  problem.delta = params.delta;
}

void require_positive(double k, const char *what) {
  if (!(k > 0.0))
    throw NonpositiveWavenumber(std::string(what) + " must be positive");
}

// Left / right sides of an axis-aligned box are recognized by the normal.
enum class Side { left, right, other };
Side side_of(const Vec2 &normal) {
  if (normal.x() < -0.5)
    return Side::left;
  if (normal.x() > 0.5)
    return Side::right;
  return Side::other;
}

} // namespace

BrokenField ManufacturedSolution::as_field() const {
  return {[u = u](int, const Vec2 &x) { return u(x); },
          [g = gradient](int, const Vec2 &x) { return g(x); }};
}

ProblemSpec manufactured_problem(std::string name, const ManufacturedSolution &exact, double k) {
  require_positive(k, "k");
  ProblemSpec p;
  p.name = std::move(name);
  p.wavenumber = [k](const Vec2 &) { return k; };
  p.constant_wavenumber = true;
  p.source = [exact, k](const Vec2 &x) { return -exact.laplacian(x) - k * k * exact.u(x); };
  p.boundary = [exact, k](const Vec2 &x, const Vec2 &n) {
    const CVec2 g = exact.gradient(x);
    return g.x() * n.x() + g.y() * n.y() + kI * k * exact.u(x);
  };
  return p;
}

Benchmark plane_wave(const BenchmarkParams &params) {
  const double k = params.k;
  require_positive(k, "k");
  ManufacturedSolution exact;
  exact.u = [k](const Vec2 &x) { return std::exp(kI * k * (x.x() + x.y())); };
  exact.gradient = [k](const Vec2 &x) {
    const Complex d = kI * k * std::exp(kI * k * (x.x() + x.y()));
    return CVec2(d, d);
  };
  exact.laplacian = [k](const Vec2 &x) { return -2.0 * k * k * std::exp(kI * k * (x.x() + x.y())); };
  Benchmark b{manufactured_problem("plane-wave", exact, k), exact, unit_square_mesh};
  apply_constants(b.problem, params);
  return b;
}

Benchmark plane_wave_x(const BenchmarkParams &params) {
  const double k = params.k;
  require_positive(k, "k");
  ManufacturedSolution exact;
  exact.u = [k](const Vec2 &x) { return std::exp(kI * k * x.x()); };
  exact.gradient = [k](const Vec2 &x) { return CVec2(kI * k * std::exp(kI * k * x.x()), 0.0); };
  exact.laplacian = [k](const Vec2 &x) { return -k * k * std::exp(kI * k * x.x()); };

  Benchmark b;
  b.problem.name = "plane-wave-x";
  b.problem.wavenumber = [k](const Vec2 &) { return k; };
  b.problem.source = [](const Vec2 &) { return Complex(0.0); };
  b.problem.boundary = [k](const Vec2 &x, const Vec2 &n) -> Complex {
    switch (side_of(n)) {
    case Side::left:
      return 0.0;
    case Side::right:
      // 2ik for integer k
      return 2.0 * kI * k * std::exp(kI * k * x.x());
    default:
      return kI * k * std::exp(kI * k * x.x());
    }
  };
  b.exact = exact;
  b.initial_mesh = periodic_box_mesh;
  apply_constants(b.problem, params);
  return b;
}

double bessel_j_half(double x) { return std::sqrt(2.0 / (kPi * x)) * std::sin(x); }

double bessel_j_half_derivative(double x) {
  return std::sqrt(2.0 / kPi) * (std::cos(x) / std::sqrt(x) - 0.5 * std::sin(x) / (x * std::sqrt(x)));
}

Benchmark lshape_bessel(const BenchmarkParams &params) {
  const double k = params.k;
  require_positive(k, "k");
  auto radius = [](const Vec2 &x) {
    const double r = x.norm();
    if (r == 0.0)
      throw EvaluationAtOrigin("Bessel solution evaluated at the reentrant corner");
    return r;
  };
  ManufacturedSolution exact;
  exact.u = [k, radius](const Vec2 &x) { return Complex(bessel_j_half(k * radius(x))); };
  exact.gradient = [k, radius](const Vec2 &x) {
    const double r = radius(x);
    const double d = k * bessel_j_half_derivative(k * r) / r;
    return CVec2(d * x.x(), d * x.y());
  };
  // Lap J_nu(kr) + k^2 J_nu(kr) = nu^2 J_nu(kr) / r^2 with nu = 1/2.
  exact.laplacian = [k, radius](const Vec2 &x) {
    const double r = radius(x);
    const double u = bessel_j_half(k * r);
    return Complex(0.25 * u / (r * r) - k * k * u);
  };

  Benchmark b{manufactured_problem("lshape-bessel", exact, k), exact, lshape_mesh};
  b.problem.source = [k, radius](const Vec2 &x) {
    const double r = radius(x);
    return Complex(-0.25 * bessel_j_half(k * r) / (r * r));
  };
  b.problem.singular_points = {Vec2(0.0, 0.0)};
  apply_constants(b.problem, params);
  return b;
}

Benchmark piecewise_k(const BenchmarkParams &params) {
  const double k1 = params.k1, k2 = params.k2;
  require_positive(k1, "k1");
  require_positive(k2, "k2");
  Benchmark b;
  b.problem.name = "piecewise-k";
  const Vec2 center(kPi, kPi);
  b.problem.wavenumber = [=](const Vec2 &x) { return (x - center).norm() < 1.5 ? k1 : k2; };
  b.problem.constant_wavenumber = false;
  b.problem.source = [](const Vec2 &) { return Complex(0.0); };
  if (params.variant == "g1") {
    b.problem.boundary = [](const Vec2 &, const Vec2 &n) -> Complex {
      switch (side_of(n)) {
      case Side::left:
        return -1.0;
      case Side::right:
        return kI;
      default:
        return 0.0;
      }
    };
  } else if (params.variant == "g2") {
    b.problem.boundary = [k2](const Vec2 &x, const Vec2 &n) -> Complex {
      switch (side_of(n)) {
      case Side::left:
        return 0.0;
      case Side::right:
        return 2.0 * kI * k2;
      default:
        return kI * k2 * std::exp(kI * k2 * x.x());
      }
    };
  } else {
    throw InvalidParameter("unknown boundary variant '" + params.variant + "' (g1 | g2)");
  }
  b.initial_mesh = periodic_box_mesh;
  apply_constants(b.problem, params);
  return b;
}

Benchmark affine_solution(const BenchmarkParams &params, Complex a, Complex bcoef, Complex c) {
  ManufacturedSolution exact;
  exact.u = [=](const Vec2 &x) { return a * x.x() + bcoef * x.y() + c; };
  exact.gradient = [=](const Vec2 &) { return CVec2(a, bcoef); };
  exact.laplacian = [](const Vec2 &) { return Complex(0.0); };
  Benchmark b{manufactured_problem("affine", exact, params.k), exact, unit_square_mesh};
  apply_constants(b.problem, params);
  return b;
}

std::vector<std::string> benchmark_names() {
  return {"plane-wave", "plane-wave-x", "lshape-bessel", "piecewise-k"};
}

Benchmark make_benchmark(const std::string &name, const BenchmarkParams &params) {
  if (name == "plane-wave")
    return plane_wave(params);
  if (name == "plane-wave-x")
    return plane_wave_x(params);
  if (name == "lshape-bessel")
    return lshape_bessel(params);
  if (name == "piecewise-k")
    return piecewise_k(params);
  throw InvalidParameter("unknown example '" + name + "'");
}

} // namespace hpdg
