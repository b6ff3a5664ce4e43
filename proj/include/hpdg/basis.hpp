#pragma once

#include <Eigen/Dense>

#include "hpdg/mesh.hpp"
#include "hpdg/types.hpp"

namespace hpdg {

/// Highest polynomial degree of the local basis.
inline constexpr int kMaxBasisDegree = 8;

inline constexpr int basis_size(int p) { return (p + 1) * (p + 2) / 2; }

/// L2(reference triangle)-orthonormal hierarchical basis of P_p.
///
/// Built by Cholesky orthonormalization (two passes) of the products
/// P_a(2x - 1) P_b(2y - 1) of Legendre polynomials, ordered by total degree
/// a + b, so the first basis_size(q) functions of the degree p basis are
/// exactly the degree q basis.
class LocalBasis {
public:
  /// Throws UnsupportedDegree unless 0 <= p <= kMaxBasisDegree.
  static const LocalBasis &get(int p);

  int degree() const { return degree_; }
  int size() const { return size_; }

  /// Values of all basis functions at a reference point.
  void values(const Vec2 &ref, Eigen::Ref<Eigen::VectorXd> out) const;
  /// Reference gradients, one row per basis function.
  void gradients(const Vec2 &ref, Eigen::Ref<Eigen::MatrixX2d> out) const;
  /// Reference second derivatives (d_xx, d_xy, d_yy), one row per function.
  void hessians(const Vec2 &ref, Eigen::Ref<Eigen::MatrixX3d> out) const;

private:
  LocalBasis(int degree);
  int degree_;
  int size_;
};

/// x = origin + jacobian * ref for the triangle's vertex order.
struct AffineMap {
  Vec2 origin;
  Eigen::Matrix2d jacobian;
  Eigen::Matrix2d inverse;
  double det = 0.0;

  static AffineMap of(const Mesh &mesh, int t);

  Vec2 to_physical(const Vec2 &ref) const { return origin + jacobian * ref; }
  Vec2 to_reference(const Vec2 &x) const { return inverse * (x - origin); }

  /// Rows of reference gradients to rows of physical gradients.
  Eigen::MatrixX2d physical_gradients(const Eigen::MatrixX2d &ref) const {
    return ref * inverse;
  }
  /// Physical Laplacians from reference (d_xx, d_xy, d_yy) rows.
  Eigen::VectorXd physical_laplacians(const Eigen::MatrixX3d &ref) const;
};

} // namespace hpdg
