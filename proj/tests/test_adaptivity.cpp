#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "hpdg/adaptivity.hpp"
#include "hpdg/errors.hpp"
#include "hpdg/mesh_io.hpp"
#include "hpdg/verification.hpp"

using namespace hpdg;

TEST_SUITE("adaptivity") {

TEST_CASE("Doerfler examples") {
  const std::vector<double> v = {4, 3, 2, 1};
  const Marking m = doerfler_mark(v, 0.5);
  CHECK(m.elements == std::vector<int>{0, 1});
  const std::vector<double> shuffled = {1, 4, 2, 3};
  CHECK(doerfler_mark(shuffled, 0.5).elements == std::vector<int>{1, 3});
  const std::vector<double> with_zero = {0.5, 0.0, 0.25, 0.25};
  CHECK(doerfler_mark(with_zero, 1.0).elements == std::vector<int>{0, 2, 3});
  // Ties go to the lower index.
  const std::vector<double> ties = {1, 2, 2, 1};
  CHECK(doerfler_mark(ties, 0.3).elements == std::vector<int>{1});
  CHECK(doerfler_mark(ties, 0.6).elements == std::vector<int>{1, 2});
}

TEST_CASE("all-zero indicators and bad input") {
  const std::vector<double> zeros(5, 0.0);
  const Marking m = doerfler_mark(zeros, 0.7);
  CHECK(m.all_zero);
  CHECK(m.elements.empty());
  const std::vector<double> v = {1, 2};
  CHECK_THROWS_AS(doerfler_mark(v, 0.0), InvalidParameter);
  CHECK_THROWS_AS(doerfler_mark(v, 1.5), InvalidParameter);
  const std::vector<double> neg = {1, -2};
  CHECK_THROWS_AS(doerfler_mark(neg, 0.5), InvalidParameter);
}

TEST_CASE("greedy marking is minimal") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 12;
    std::vector<double> v(n);
    for (double &x : v)
      x = unit(rng);
    for (double theta : {0.3, 0.5, 0.7, 1.0})
      CHECK(static_cast<int>(doerfler_mark(v, theta).elements.size()) ==
            exhaustive_min_marking(v, theta));
  }
}

namespace {


} // namespace

TEST_CASE("zero steps give a single solve") {
  const Benchmark b = plane_wave(BenchmarkParams{});
  const Mesh m = unit_square_mesh(2);
  AdaptOptions o;
  o.stop.max_steps = 0;
  const RefinementHistory h = adapt(b.problem, m, DegreeMap::uniform(m, 1), o, b.exact);
  REQUIRE(h.steps.size() == 1);
  CHECK(h.steps[0].nelems == 8);
  CHECK(h.stop_reason == "max_steps");
}

TEST_CASE("history integrity in adaptive mode") {
  BenchmarkParams bp;
  bp.k = 8.0;
  const Benchmark b = lshape_bessel(bp);
  const Mesh m = lshape_mesh(1);
  AdaptOptions o;
  o.stop.max_steps = 6;
  int calls = 0;
  const RefinementHistory h =
      adapt(b.problem, m, DegreeMap::uniform(m, 2), o, b.exact,
            [&](const StepRecord &r, const DgSolution &s, const EstimatorReport &rep) {
              ++calls;
              CHECK(r.ndofs == s.mesh().num_triangles() * 6);
              CHECK(rep.elements.size() == static_cast<std::size_t>(r.nelems));
            });
  REQUIRE(h.steps.size() == 7);
  CHECK(calls == 7);
  for (std::size_t i = 1; i < h.steps.size(); ++i) {
    CHECK(h.steps[i].nelems > h.steps[i - 1].nelems);
    CHECK(h.steps[i].hmax <= h.steps[i - 1].hmax + 1e-14);
    CHECK(h.steps[i].hmin < h.steps[i - 1].hmin);
    CHECK(h.steps[i].step == static_cast<int>(i));
    CHECK(std::isfinite(h.steps[i].err_ht));
  }
}

TEST_CASE("DOF and estimator stops") {
  const Benchmark b = plane_wave(BenchmarkParams{});
  const Mesh m = unit_square_mesh(2);
  AdaptOptions o;
  o.mode = RefineMode::uniform;
  o.stop.max_steps = 20;
  o.stop.max_dofs = 2000;
  const RefinementHistory h = adapt(b.problem, m, DegreeMap::uniform(m, 1), o);
  CHECK(h.stop_reason == "max_dofs");
  CHECK(h.steps.back().ndofs <= 2000);
  CHECK(h.steps.size() == 4);
  CHECK(std::isnan(h.steps.back().err_ht));

  o.stop.max_dofs = 0;
  o.stop.target_eta = 5.0;
  const RefinementHistory t = adapt(b.problem, m, DegreeMap::uniform(m, 1), o);
  CHECK(t.stop_reason == "target_eta");
  CHECK(t.steps.back().eta_check <= 5.0);
  CHECK(t.steps[t.steps.size() - 2].eta_check > 5.0);
}

TEST_CASE("history CSV") {
  const Benchmark b = plane_wave(BenchmarkParams{});
  const Mesh m = unit_square_mesh(1);
  AdaptOptions o;
  o.stop.max_steps = 2;
  o.timing = false;
  const RefinementHistory h = adapt(b.problem, m, DegreeMap::uniform(m, 1), o, b.exact);
  std::ostringstream s;
  write_history_csv(s, h);
  std::istringstream in(s.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "step,nelems,ndofs,hmax,hmin,rho,mkhp,eta_check,eta,osc,err_ht,solvable,seconds");
  int rows = 0;
  while (std::getline(in, line)) {
    CHECK(std::count(line.begin(), line.end(), ',') == 12);
    CHECK(line.substr(line.size() - 2) == ",0");
    ++rows;
  }
  CHECK(rows == 3);
  std::ostringstream again;
  write_history_csv(again, adapt(b.problem, m, DegreeMap::uniform(m, 1), o, b.exact));
  CHECK(again.str() == s.str());
}

}
