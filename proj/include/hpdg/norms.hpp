#pragma once

#include "hpdg/solution.hpp"

namespace hpdg {

/// ||k v|| and ||grad_T v|| with their sum, the error norm ||v||_{H;T}.
struct HNorm {
  double weighted_l2 = 0.0;
  double gradient = 0.0;
  double total() const { return weighted_l2 + gradient; }
};

/// ||u - u_T||_{H;T} at the data quadrature order.
HNorm h_norm_error(const DgSolution &sol, const ComplexField &u, const VectorField &grad_u);

/// ||u||_{H;T} of a smooth function on the mesh of `sol`.
HNorm h_norm(const DgSolution &sol, const ComplexField &u, const VectorField &grad_u);

/// Mesh-dependent dG and dG+ norms of a discrete field. `defined` is false
/// when the boundary weight k (1 - d k h / p) is negative somewhere, in which
/// case both values are NaN.
struct DgNorm {
  double dg = 0.0;
  double dg_plus = 0.0;
  bool defined = true;
};

DgNorm dg_norm(const DgSolution &v);

/// Like dg_norm but throws NormUndefined instead of flagging.
double dg_norm_or_throw(const DgSolution &v);

} // namespace hpdg
