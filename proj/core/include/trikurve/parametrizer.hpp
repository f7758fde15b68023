#pragma once

#include <limits>
#include <vector>

#include "trikurve/geometry.hpp"

namespace trikurve {

enum class ParamType { kTypeI, kTypeII, kTypeIII, kHeisenberg };
std::string to_string(ParamType t);

struct HelixParam {
  ParamType type = ParamType::kHeisenberg;
  double a = 0.0;
  double b = 0.0;
  double alpha0 = 0.0;
  double zeta = 0.0;
  // Type (i): x = mu sin(alpha0) sin(beta) + c1, y = -mu sin(alpha0) cos(beta) + c2.
  double mu = 1.0;
  // Type (i): centre offsets; type (ii): c1 is derived, c2 is the z offset;
  // type (iii): c1 is the z offset.
  double c1 = 0.0;
  double c2 = 0.0;
  double beta0 = 0.0;   // type (ii); derived for type (iii)
  double x0 = 0.0;      // derived for type (iii)
  double lambda = 0.0;  // Heisenberg phase
  int sign = 1;         // type (iii): +1 for x0 = -(...), -1 for x0 = +(...)
  double beta_init = 0.0;  // type (i): beta at the start of the interval
  double x_init = 0.0;     // type (ii): x at the start of the interval
  double y_init = 0.0;     // type (iii): y at the start of the interval
  Interval interval{0.0, 1.0};
  double step = 1e-3;
};

struct HelixCurve {
  CurveSamples curve;
  std::vector<double> beta;
  HelixParam param;  // with derived constants filled in
  bool truncated = false;
  double escape_s = std::numeric_limits<double>::quiet_NaN();
  double unit_speed_error = 0.0;  // max | |gamma'|_g - 1 |
};

// T, N, B as rows, in orthonormal-frame components:
//   T = (sin a cos b, sin a sin b, cos a), N = (-sin b, cos b, 0),
//   B = (-cos a cos b, -cos a sin b, sin a).
Mat3 frame_n3zero(double alpha0, double beta);

// zeta - (beta' + 2a sin(alpha0)(y cos(beta) - x sin(beta)) - b cos(alpha0)),
// with beta' from finite differences of the beta samples.
std::vector<double> beta_ode_residual(const CurveSamples& curve, const std::vector<double>& beta,
                                      double a, double b, double alpha0, double zeta);

// Right-hand side (mu / a)((b cos(alpha0) + zeta - 1/mu) + a mu sin^2(alpha0))
// of the type (i) constraint c1^2 + c2^2 = ... .
double type_i_radius_squared(double a, double b, double alpha0, double zeta, double mu);
// (c1, c2) = r (cos phi, sin phi) with r^2 from the constraint; throws
// ConstraintViolated when the right-hand side is negative.
std::array<double, 2> type_i_offsets(double a, double b, double alpha0, double zeta, double mu,
                                     double phi);

HelixCurve parametrize_type_i(const HelixParam& p);
HelixCurve parametrize_type_ii(const HelixParam& p);
HelixCurve parametrize_type_iii(const HelixParam& p);
HelixCurve parametrize_heisenberg(const HelixParam& p);
HelixCurve parametrize(const HelixParam& p);

// Closed form of the type (iii) y(s) (a > 0: tangent, a < 0: hyperbolic
// tangent), for checking the numerical solution.
double type_iii_closed_form(const HelixParam& derived, double s);

}  // namespace trikurve
