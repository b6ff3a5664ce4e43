#pragma once

#include <Eigen/Sparse>

#include "hpdg/mesh.hpp"
#include "hpdg/problem.hpp"
#include "hpdg/solution.hpp"

namespace hpdg {

using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::ColMajor, int>;

/// Matrix and load vector of the dG discretization. Row i is the test
/// function phi_i: matrix(i, j) = a_T(phi_j, phi_i), rhs(i) = F_T(phi_i).
struct DgSystem {
  SparseMatrix matrix;
  Eigen::VectorXcd rhs;
  DofLayout layout;
};

/// Assembles a_T and F_T over the local orthonormal bases.
///
/// Volume terms use exactness 2p+2 (data order when k varies in space), edge
/// terms 2 max(p+, p-) + 2, and every integral with f or g the data order.
/// Throws EmptyMesh, InvalidParameter (p_T < 1), QuadratureUnavailable.
DgSystem assemble(const Mesh &mesh, const DegreeMap &degrees, const ProblemSpec &problem);

/// Vector of a_T(w, phi_i) over all basis functions, by direct quadrature of
/// w at the data order. Independent of the matrix assembly.
Eigen::VectorXcd apply_form(const Mesh &mesh, const DegreeMap &degrees,
                            const ProblemSpec &problem, const BrokenField &w);

struct Solvability {
  /// sup over boundary edges of delta k h_e / p_e.
  double value = 0.0;
  /// value < 1/2: unique solvability is guaranteed.
  bool guaranteed = false;
};

Solvability solvability_check(const Mesh &mesh, const DegreeMap &degrees,
                              const ProblemSpec &problem);

struct SolveResult {
  Eigen::VectorXcd coefficients;
  double relative_residual = 0.0;
  bool dense = false;
};

/// Below this many unknowns the system is solved with a dense LU.
inline constexpr int kDenseSolveLimit = 400;

/// Direct solve. Throws SingularSystem, or ResidualTooLarge when the relative
/// residual stays above 1e-10 after iterative refinement.
SolveResult solve(const DgSystem &system);

/// assemble + solve.
DgSolution solve(const Mesh &mesh, const DegreeMap &degrees, const ProblemSpec &problem);
DgSolution solve(Mesh &&, const DegreeMap &, const ProblemSpec &) = delete;
DgSolution solve(const Mesh &, DegreeMap &&, const ProblemSpec &) = delete;
DgSolution solve(const Mesh &, const DegreeMap &, ProblemSpec &&) = delete;

/// max_i |a_T(u, phi_i) - F_T(phi_i)| / max_i |F_T(phi_i)| for a smooth u.
/// Vanishes (up to quadrature) when u solves the boundary value problem.
double consistency_residual(const Mesh &mesh, const DegreeMap &degrees,
                            const ProblemSpec &problem, const BrokenField &exact);

} // namespace hpdg
