#include "hpdg/basis.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "hpdg/errors.hpp"
#include "hpdg/quadrature.hpp"

namespace hpdg {

namespace {

constexpr int kMaxSize = basis_size(kMaxBasisDegree);

struct Index {
  int a, b;
};

std::vector<Index> indices(int p) {
  std::vector<Index> out;
  for (int d = 0; d <= p; ++d)
    for (int b = 0; b <= d; ++b)
      out.push_back({d - b, b});
  return out;
}

// Legendre P_n(2s - 1) and its first two s-derivatives, n = 0..p.
struct Legendre {
  std::array<double, kMaxBasisDegree + 1> v, d1, d2;
  Legendre(double s, int p) {
    const double t = 2.0 * s - 1.0;
    v[0] = 1.0;
    d1[0] = d2[0] = 0.0;
    if (p >= 1) {
      v[1] = t;
      d1[1] = 1.0;
      d2[1] = 0.0;
    }
    for (int n = 2; n <= p; ++n) {
      v[n] = ((2 * n - 1) * t * v[n - 1] - (n - 1) * v[n - 2]) / n;
      d1[n] = d1[n - 2] + (2 * n - 1) * v[n - 1];
      d2[n] = d2[n - 2] + (2 * n - 1) * d1[n - 1];
    }
    // d/ds = 2 d/dt
    for (int n = 0; n <= p; ++n) {
      d1[n] *= 2.0;
      d2[n] *= 4.0;
    }
  }
};

using MatL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

// Inverse of the Cholesky factor of a symmetric positive definite matrix.
MatL inverse_cholesky(const MatL &gram) {
  const int n = static_cast<int>(gram.rows());
  MatL L = MatL::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    long double d = gram(j, j);
    for (int k = 0; k < j; ++k)
      d -= L(j, k) * L(j, k);
    L(j, j) = std::sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      long double s = gram(i, j);
      for (int k = 0; k < j; ++k)
        s -= L(i, k) * L(j, k);
      L(i, j) = s / L(j, j);
    }
  }
  MatL inv = MatL::Zero(n, n);
  for (int col = 0; col < n; ++col)
    for (int i = col; i < n; ++i) {
      long double s = (i == col) ? 1.0L : 0.0L;
      for (int k = col; k < i; ++k)
        s -= L(i, k) * inv(k, col);
      inv(i, col) = s / L(i, i);
    }
  return inv;
}

struct Table {
  std::vector<Index> idx;
  Eigen::MatrixXd coeff;

  Table() {
    idx = indices(kMaxBasisDegree);
    const int n = kMaxSize;
    const auto &rule = triangle_rule(2 * kMaxBasisDegree);
    MatL raw(rule.size(), n);
    for (int q = 0; q < rule.size(); ++q) {
      const Legendre lx(rule.points[q].x(), kMaxBasisDegree), ly(rule.points[q].y(), kMaxBasisDegree);
      for (int j = 0; j < n; ++j)
        raw(q, j) = static_cast<long double>(lx.v[idx[j].a]) * ly.v[idx[j].b];
    }
    auto gram_of = [&](const MatL &c) {
      const MatL vals = raw * c.transpose();
      MatL g = MatL::Zero(n, n);
      for (int q = 0; q < rule.size(); ++q)
        g += static_cast<long double>(rule.weights[q]) * vals.row(q).transpose() * vals.row(q);
      return g;
    };
    MatL c = inverse_cholesky(gram_of(MatL::Identity(n, n)));
    c = (inverse_cholesky(gram_of(c)) * c).eval();
    coeff = c.cast<double>();
  }
};

const Table &table() {
  static const Table t;
  return t;
}

} // namespace

LocalBasis::LocalBasis(int degree) : degree_(degree), size_(basis_size(degree)) {}

const LocalBasis &LocalBasis::get(int p) {
  static const std::array<LocalBasis, kMaxBasisDegree + 1> bases = [] {
    table();
    return std::array<LocalBasis, kMaxBasisDegree + 1>{
        LocalBasis(0), LocalBasis(1), LocalBasis(2), LocalBasis(3), LocalBasis(4),
        LocalBasis(5), LocalBasis(6), LocalBasis(7), LocalBasis(8)};
  }();
  if (p < 0 || p > kMaxBasisDegree)
    throw UnsupportedDegree("basis degree " + std::to_string(p) + " outside [0, " +
                            std::to_string(kMaxBasisDegree) + "]");
  return bases[p];
}

void LocalBasis::values(const Vec2 &ref, Eigen::Ref<Eigen::VectorXd> out) const {
  const auto &t = table();
  const Legendre lx(ref.x(), degree_), ly(ref.y(), degree_);
  Eigen::Matrix<double, kMaxSize, 1> m;
  for (int j = 0; j < size_; ++j)
    m[j] = lx.v[t.idx[j].a] * ly.v[t.idx[j].b];
  out.noalias() = t.coeff.topLeftCorner(size_, size_).triangularView<Eigen::Lower>() *
                  m.head(size_);
}

void LocalBasis::gradients(const Vec2 &ref, Eigen::Ref<Eigen::MatrixX2d> out) const {
  const auto &t = table();
  const Legendre lx(ref.x(), degree_), ly(ref.y(), degree_);
  Eigen::Matrix<double, kMaxSize, 2> m;
  for (int j = 0; j < size_; ++j) {
    const int a = t.idx[j].a, b = t.idx[j].b;
    m(j, 0) = lx.d1[a] * ly.v[b];
    m(j, 1) = lx.v[a] * ly.d1[b];
  }
  out.noalias() = t.coeff.topLeftCorner(size_, size_).triangularView<Eigen::Lower>() *
                  m.topRows(size_);
}

void LocalBasis::hessians(const Vec2 &ref, Eigen::Ref<Eigen::MatrixX3d> out) const {
  const auto &t = table();
  const Legendre lx(ref.x(), degree_), ly(ref.y(), degree_);
  Eigen::Matrix<double, kMaxSize, 3> m;
  for (int j = 0; j < size_; ++j) {
    const int a = t.idx[j].a, b = t.idx[j].b;
    m(j, 0) = lx.d2[a] * ly.v[b];
    m(j, 1) = lx.d1[a] * ly.d1[b];
    m(j, 2) = lx.v[a] * ly.d2[b];
  }
  out.noalias() = t.coeff.topLeftCorner(size_, size_).triangularView<Eigen::Lower>() *
                  m.topRows(size_);
}

AffineMap AffineMap::of(const Mesh &mesh, int t) {
  const auto &tri = mesh.triangle(t);
  AffineMap map;
  map.origin = mesh.vertex(tri[0]);
  map.jacobian.col(0) = mesh.vertex(tri[1]) - map.origin;
  map.jacobian.col(1) = mesh.vertex(tri[2]) - map.origin;
  map.det = map.jacobian.determinant();
  map.inverse = map.jacobian.inverse();
  return map;
}

Eigen::VectorXd AffineMap::physical_laplacians(const Eigen::MatrixX3d &ref) const {
  const Eigen::Matrix2d M = inverse * inverse.transpose();
  return ref.col(0) * M(0, 0) + 2.0 * ref.col(1) * M(0, 1) + ref.col(2) * M(1, 1);
}

} // namespace hpdg
