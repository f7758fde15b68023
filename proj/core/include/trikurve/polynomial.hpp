#pragma once

#include <span>
#include <vector>

namespace trikurve {

// Coefficients are stored in ascending order: c[0] + c[1] x + ... + c[n] x^n.
double poly_eval(std::span<const double> c, double x);
std::vector<double> poly_derivative(std::span<const double> c);
// Bound on the rounding error of poly_eval at x.
double poly_eval_error(std::span<const double> c, double x);

struct PolynomialRoot {
  double value = 0.0;
  int multiplicity = 1;
};

// Real roots in (0, B] where B is the Cauchy bound 1 + max |c_i / c_n|.
// Monotone pieces are separated by the (recursively isolated) roots of the
// derivative; sign changes are bisected and polished by Newton steps. A
// critical point where |p| is within rounding error of zero is reported as a
// root of multiplicity >= 2.
std::vector<PolynomialRoot> positive_roots(std::span<const double> c);

double cauchy_bound(std::span<const double> c);

}  // namespace trikurve
