#pragma once

#include <complex>

#include <Eigen/Core>

namespace hpdg {

using Complex = std::complex<double>;
using Vec2 = Eigen::Vector2d;
using CVec2 = Eigen::Vector2cd;

inline constexpr Complex kI{0.0, 1.0};

} // namespace hpdg

#include <functional>

namespace hpdg {

using RealField = std::function<double(const Vec2 &)>;
using ComplexField = std::function<Complex(const Vec2 &)>;

} // namespace hpdg

namespace hpdg {

using VectorField = std::function<CVec2(const Vec2 &)>;

} // namespace hpdg
