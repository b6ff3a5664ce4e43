#include "hpdg/quadrature.hpp"

#include <array>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "hpdg/errors.hpp"

namespace hpdg {

namespace {

QuadratureRule make_gauss_legendre(int n) {
  QuadratureRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  rule.exactness = 2 * n - 1;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Newton iteration on P_n from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
        break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Map [-1,1] to [0,1].
    rule.points[i] = Vec2(0.5 * (1.0 - x), 0.0);
    rule.points[n - 1 - i] = Vec2(0.5 * (1.0 + x), 0.0);
    rule.weights[i] = 0.5 * w;
    rule.weights[n - 1 - i] = 0.5 * w;
  }
  return rule;
}

QuadratureRule make_triangle_rule(int degree) {
  // x = u, y = (1 - u) v with Jacobian (1 - u): degree d in (x, y) becomes
  // degree d + 1 in u and d in v.
  const auto &gu = gauss_legendre((degree + 2 + 1) / 2);
  const auto &gv = gauss_legendre((degree + 1 + 1) / 2);
  QuadratureRule rule;
  rule.exactness = degree;
  for (int i = 0; i < gu.size(); ++i)
    for (int j = 0; j < gv.size(); ++j) {
      const double u = gu.points[i].x();
      const double v = gv.points[j].x();
      rule.points.emplace_back(u, (1.0 - u) * v);
      rule.weights.push_back(gu.weights[i] * gv.weights[j] * (1.0 - u));
    }
  return rule;
}

template <class Make> class RuleCache {
public:
  explicit RuleCache(Make make) : make_(make) {}

  const QuadratureRule &get(int key) {
    std::lock_guard lock(mutex_);
    auto &slot = rules_[key];
    if (!slot)
      slot = std::make_unique<QuadratureRule>(make_(key));
    return *slot;
  }

private:
  Make make_;
  std::mutex mutex_;
  std::array<std::unique_ptr<QuadratureRule>, kMaxQuadratureDegree + 2> rules_;
};

void check_degree(int exactness) {
  if (exactness < 0 || exactness > kMaxQuadratureDegree)
    throw UnsupportedDegree("quadrature exactness " + std::to_string(exactness) +
                            " outside [0, " + std::to_string(kMaxQuadratureDegree) + "]");
}

} // namespace

const QuadratureRule &gauss_legendre(int num_points) {
  static RuleCache cache(make_gauss_legendre);
  if (num_points < 1 || num_points > kMaxQuadratureDegree + 1)
    throw UnsupportedDegree("Gauss-Legendre with " + std::to_string(num_points) + " points");
  return cache.get(num_points);
}

const QuadratureRule &edge_rule(int exactness) {
  check_degree(exactness);
  return gauss_legendre((exactness + 2) / 2);
}

const QuadratureRule &triangle_rule(int exactness) {
  static RuleCache cache(make_triangle_rule);
  check_degree(exactness);
  return cache.get(exactness);
}

} // namespace hpdg
