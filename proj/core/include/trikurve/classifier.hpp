#pragma once

#include <array>
#include <limits>
#include <string>
#include <vector>

#include "trikurve/geometry.hpp"
#include "trikurve/polynomial.hpp"

namespace trikurve {

enum class HelixClass { kGeodesic, kSurfaceCircle, kSpaceFormHelix, kBcvZeroTorsion, kBcvHopfHelix };
std::string to_string(HelixClass c);

struct HelixSolution {
  ManifoldModel ambient = ManifoldModel::space_form3(0.0);
  HelixClass tag = HelixClass::kGeodesic;
  double kappa0 = 0.0;
  double tau0 = 0.0;
  // BCV data (NaN when not applicable).
  double zeta = std::numeric_limits<double>::quiet_NaN();
  double alpha0 = std::numeric_limits<double>::quiet_NaN();
  double b3 = std::numeric_limits<double>::quiet_NaN();
  bool admissible = true;
  std::string reason;
  // Residuals of the defining equations (normal, binormal).
  double residual_normal = 0.0;
  double residual_binormal = 0.0;
  int multiplicity = 1;
  std::string note;
};

// Constant-curvature triharmonic curves on a surface with K_S constant along
// the curve: geodesics, and circles with kappa_g^2 = 2 K_S when K_S > 0.
std::vector<HelixSolution> classify_surface(double gauss_k);

// Geodesic plus both branches kappa0^2 = (rho - tau0^2) +- sqrt(rho (rho -
// tau0^2)), each flagged admissible only when it is real and positive.
std::vector<HelixSolution> classify_spaceform(double rho, double tau0);

// kappa0^2 = 2 (b^2/4 + (4a - b^2) B3^2) with the admissibility conditions on
// B3. Throws SpaceFormDegenerate when 4a = b^2.
HelixSolution bcv_zero_torsion(double a, double b, double b3);

// Left-hand sides of the BCV helix equations in terms of the vertical
// projections:
//   (k^2+t^2)^2 - (2k^2+t^2)(b^2/4 + (4a-b^2) B3^2) - k t (4a-b^2) T3 B3,
//   (2k^2+t^2) N3 B3 + k t T3 N3.
std::array<double, 2> bcv_helix_equations(double a, double b, double kappa, double tau,
                                          double t3, double n3, double b3);

// P4 coefficients in ascending order.
std::array<double, 5> p4_coefficients(double a, double b, double alpha0);
double p4_eval(double a, double b, double alpha0, double zeta);
// Sorted positive roots of P4. Throws SpaceFormDegenerate when 4a = b² and
// InvalidArgument unless sin(alpha0) > 0.
std::vector<PolynomialRoot> p4_roots(double a, double b, double alpha0);

// kappa0 = zeta sin(alpha0), tau0 = -zeta cos(alpha0) - b/2, checked against
// the BCV helix equations with T3 = cos(alpha0), N3 = 0, B3 = sin(alpha0).
// Throws ResidualTooLarge if the first equation is off by more than 1e-8
// relative to its largest term.
HelixSolution helix_from_root(double a, double b, double alpha0, double zeta);

// Whether T3 is constant exactly when N3 vanishes along a sampled BCV curve,
// together with the derivative identity T3' = kappa N3.
struct N3Dichotomy {
  bool t3_constant = false;
  bool n3_zero = false;
  bool holds = false;
  double t3_variation = 0.0;       // max |T3 - mean T3|
  double n3_max = 0.0;             // max |N3|
  double derivative_residual = 0.0;  // max |T3' - kappa N3|
};
N3Dichotomy n3_dichotomy_check(const CurveSamples& curve, double tol = 1e-6);

}  // namespace trikurve
