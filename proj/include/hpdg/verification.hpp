#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "hpdg/mesh.hpp"
#include "hpdg/quadrature.hpp"

namespace hpdg {

struct SuiteResult {
  std::string name;
  bool passed = false;
  int checks = 0;
  int failures = 0;
  std::string detail;
};

/// Hook applied to a copy of every rule before it is checked (negative
/// controls corrupt the weights here).
using RuleHook = std::function<void(QuadratureRule &)>;

/// Every triangle rule up to `max_exactness` integrates all monomials x^a y^b
/// with a + b <= exactness to 1e-12 relative; same for edge rules and x^a.
SuiteResult verify_quadrature(int max_exactness = kMaxQuadratureDegree,
                              const RuleHook &hook = {});

/// a_T(u, phi) - F_T(phi) for the smooth benchmark solutions, relative to
/// max |F_T(phi)|, must stay below 1e-8. For the L-shape, rows of elements
/// with a vertex within one element diameter of the corner are skipped.
SuiteResult verify_consistency();

/// Doerfler marking versus exhaustive search on random instances.
SuiteResult verify_marking(int instances = 200, std::uint64_t seed = 1);

/// Random adaptive-style refinements of the benchmark meshes stay conforming
/// and keep rho_T within 2x of the initial mesh.
SuiteResult verify_conformity(int rounds = 20, std::uint64_t seed = 1);

/// u = x with matching data is reproduced exactly for k <= 20, p = 1..3:
/// H-error <= 1e-8 and eta, eta_check <= 1e-9.
SuiteResult verify_polynomial_exactness();

/// Brute-force conformity check independent of Mesh::build: edge multiplicity,
/// no vertex strictly inside another edge, positive orientation, total area.
bool is_conforming(const Mesh &mesh, double expected_area, std::string *why = nullptr);

/// Smallest cardinality of a subset of `squared` whose sum reaches
/// theta * total, by enumerating all subsets (n <= 20).
int exhaustive_min_marking(const std::vector<double> &squared, double theta);

std::vector<SuiteResult> run_all_suites(std::uint64_t seed = 1);

void print_suite(std::ostream &out, const SuiteResult &r);

} // namespace hpdg
