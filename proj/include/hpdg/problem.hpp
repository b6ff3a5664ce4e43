#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hpdg/types.hpp"

namespace hpdg {

/// Robin datum g, evaluated at a boundary point with the outward unit normal
/// of the boundary edge it lies on.
using BoundaryField = std::function<Complex(const Vec2 &x, const Vec2 &normal)>;

/// Quadrature and orientation knobs that are not part of the PDE.
struct Numerics {
  /// When positive, replaces the data quadrature order policy.
  int data_order_override = 0;
  /// Uses the higher-index triangle as the "+" side of interior jumps.
  bool flip_jump_orientation = false;
};

/// Helmholtz problem  -div grad u - k^2 u = f  in the domain,
/// d_n u + i k u = g  on the boundary, with the penalty constants of the dG
/// form.
struct ProblemSpec {
  std::string name;
  RealField wavenumber;
  /// True when k does not vary in space. Variable k raises the quadrature of
  /// the volume mass term to the data order.
  bool constant_wavenumber = true;
  ComplexField source;
  BoundaryField boundary;
  double alpha = 30.0;
  double beta = 1.0;
  double delta = 0.25;
  /// Points where the data is singular; elements touching them are flagged in
  /// estimator reports.
  std::vector<Vec2> singular_points;
  Numerics numerics;

  /// Throws InvalidParameter for non-positive constants or missing fields.
  void validate() const;

  /// Quadrature exactness for integrals with non-polynomial data on a cell of
  /// size h with polynomial degree p and largest wavenumber k:
  /// max(2p + 4, ceil(2 k h) + 10) unless overridden.
  int data_order(int p, double k, double h) const;
};

} // namespace hpdg
