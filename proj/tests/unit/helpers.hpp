#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include "trikurve/geometry.hpp"

namespace th {

inline bool near(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

inline double max_abs_diff(const trikurve::Vec3& a, const trikurve::Vec3& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

inline std::mt19937_64& rng() {
  static std::mt19937_64 g(20260416);
  return g;
}

inline double uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

}  // namespace th
