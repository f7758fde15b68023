#include "trikurve/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "trikurve/error.hpp"

namespace trikurve {
namespace {

std::vector<double> trimmed(std::span<const double> c) {
  std::vector<double> v(c.begin(), c.end());
  while (!v.empty() && v.back() == 0.0) v.pop_back();
  return v;
}

int sign(double v) { return (v > 0.0) - (v < 0.0); }

// Root of p in (lo, hi) given p(lo) and p(hi) of opposite sign.
double bisect(const std::vector<double>& p, double lo, double hi) {
  int slo = sign(poly_eval(p, lo));
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const int sm = sign(poly_eval(p, mid));
    if (sm == 0) return mid;
    if (sm == slo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  const std::vector<double> dp = poly_derivative(p);
  for (int it = 0; it < 3; ++it) {
    const double d = poly_eval(dp, x);
    if (d == 0.0) break;
    const double next = x - poly_eval(p, x) / d;
    if (!(next >= lo && next <= hi)) break;
    x = next;
  }
  return x;
}

// Roots of p in (lo, hi], p of degree >= 1.
std::vector<PolynomialRoot> roots_in(const std::vector<double>& p, double lo, double hi) {
  const int deg = static_cast<int>(p.size()) - 1;
  std::vector<PolynomialRoot> out;
  if (deg < 1) return out;
  if (deg == 1) {
    const double x = -p[0] / p[1];
    if (x > lo && x <= hi) out.push_back({x, 1});
    return out;
  }
  const std::vector<PolynomialRoot> crit = roots_in(poly_derivative(p), lo, hi);
  // Breakpoints with the value of p; near-zero critical values are roots.
  std::vector<double> xs{lo};
  std::vector<int> signs{sign(poly_eval(p, lo))};
  for (const auto& c : crit) {
    const double v = poly_eval(p, c.value);
    if (std::abs(v) <= poly_eval_error(p, c.value)) {
      out.push_back({c.value, c.multiplicity + 1});
      xs.push_back(c.value);
      signs.push_back(0);
    } else {
      xs.push_back(c.value);
      signs.push_back(sign(v));
    }
  }
  if (xs.back() < hi) {
    xs.push_back(hi);
    signs.push_back(sign(poly_eval(p, hi)));
    if (signs.back() == 0) out.push_back({hi, 1});
  }
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    if (signs[i] != 0 && signs[i + 1] != 0 && signs[i] != signs[i + 1]) {
      out.push_back({bisect(p, xs[i], xs[i + 1]), 1});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const PolynomialRoot& a, const PolynomialRoot& b) { return a.value < b.value; });
  return out;
}

}  // namespace

double poly_eval(std::span<const double> c, double x) {
  double acc = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
  return acc;
}

double poly_eval_error(std::span<const double> c, double x) {
  double acc = 0.0;
  const double ax = std::abs(x);
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * ax + std::abs(c[i]);
  return 4.0 * static_cast<double>(c.size()) * std::numeric_limits<double>::epsilon() * acc;
}

std::vector<double> poly_derivative(std::span<const double> c) {
  if (c.size() <= 1) return {0.0};
  std::vector<double> d(c.size() - 1);
  for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = static_cast<double>(i) * c[i];
  return d;
}

double cauchy_bound(std::span<const double> c) {
  const std::vector<double> p = trimmed(c);
  if (p.empty()) throw Error(ErrorCode::kInvalidArgument, "zero polynomial");
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) m = std::max(m, std::abs(p[i] / p.back()));
  return 1.0 + m;
}

std::vector<PolynomialRoot> positive_roots(std::span<const double> c) {
  const std::vector<double> p = trimmed(c);
  if (p.empty()) throw Error(ErrorCode::kInvalidArgument, "zero polynomial has every root");
  if (p.size() == 1) return {};
  return roots_in(p, 0.0, cauchy_bound(p));
}

}  // namespace trikurve
