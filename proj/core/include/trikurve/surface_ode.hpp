#pragma once

#include <span>
#include <vector>

#include "trikurve/profile.hpp"

namespace trikurve {

// Constants of the first integrals
//   5 k'^2 = c2 - 2 c1 / k + k^4 + (5/3) tau0^2 k^2
//   4 k'^2 = c0 + k^2 (rho - k^2 / 4)            (space-form binormal integral)
struct FirstIntegralParams {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double tau0 = 0.0;
  double rho_or_ks = 0.0;
};

// Tangent and normal components of the triharmonic equation for a surface
// curve, divided by -5 and 1 respectively.
struct SurfaceResidual {
  double res1 = 0.0;  // k k''' + 2 k' k'' - 2 k^3 k'
  double res2 = 0.0;  // k'''' - 15 k k'^2 - 10 k^2 k'' + k^5 + K (k'' - 2 k^3)
  // Largest absolute term of each equation, for relative residuals.
  double scale1 = 0.0;
  double scale2 = 0.0;
};

SurfaceResidual surface_residual(const std::array<double, 5>& kappa_jet, double gauss_k);
std::vector<SurfaceResidual> surface_residuals(std::span<const ProfileJet> jets,
                                               std::span<const double> gauss_k);

// Radicand of the first integral divided by 5, i.e. the value of k'^2.
double first_integral_rhs(const FirstIntegralParams& p, double kappa);
// k'' implied by differentiating the first integral:
//   k'' = c1 / (5 k^2) + (2/5) k^3 + (tau0^2 / 3) k.
double first_integral_second_derivative(const FirstIntegralParams& p, double kappa);

struct FirstIntegralOptions {
  int slope_sign = -1;   // sign of k'(s0) chosen from the square root
  double step = 1e-3;    // output spacing (the integrator adapts internally)
  double rel_tol = 1e-13;
  double abs_tol = 1e-14;
};

struct FirstIntegralSolution {
  std::vector<double> s;
  std::vector<double> kappa;
  std::vector<double> kappa_prime;
  std::vector<double> kappa_second;
};

// Integrates the first integral from kappa(s0) = kappa_init over
// [interval.lo, interval.hi]. The orbit is followed through the
// equivalent second-order equation, so simple turning points (k' = 0 with
// k'' != 0) are crossed without a sign switch.
// Errors: NegativeRadicand if k'^2 < 0 at kappa_init; StalledAtDoubleRoot if
// both k' and k'' vanish there (the constant solution); CurvatureVanishes or
// BlowUp if the orbit leaves k > 0 or escapes to infinity.
FirstIntegralSolution solve_first_integral(const FirstIntegralParams& params,
                                           double kappa_init, Interval interval,
                                           const FirstIntegralOptions& options = {});

// Jet (k, k', ..., k'''') along an orbit of the tau0 = 0 first integral,
// from k and k' using k'' = c1/(5k^2) + 2k^3/5 and its derivatives.
// Entry 5 is k^(5).
std::array<double, 6> first_integral_jet(double c1, double kappa, double kappa_prime);

// tau^2 = (k'''' - 15 k k'^2 - 10 k^2 k'' + k^5) / (k'' - 2 k^3), the torsion
// that makes the directrix of the normal ruled surface triharmonic.
// Returns the positive root. Constant curvature (k' = k'' = 0) is rejected
// with DegenerateDenominator; that branch belongs to the classifier.
double torsion_from_eq22(const std::array<double, 5>& kappa_jet);
std::vector<double> torsion_from_eq22(std::span<const ProfileJet> jets);

// 51 k^10 + 75 k^9 + 40 K k^8 + 63 c2 k^6 - 84 c1 k^5 - 5 c1 K k^3
//   - 6 c1 c2 k + 14 c1^2, with the coefficients as published.
double degree10_witness(double kappa, double c1, double c2, double gauss_k);
// The polynomial actually produced by eliminating k'''' from the normal
// equation with k'' and k'^2 taken from the first integrals. It differs from
// the published one only in the leading terms: 126 k^10 instead of
// 51 k^10 + 75 k^9.
double degree10_elimination_witness(double kappa, double c1, double c2, double gauss_k);

// 21 k^5 + ((80/3) tau0^2 - 20 rho) k^3 + (16 c2 - 20 c0) k - 32 c1.
double degree5_witness(double kappa, double tau0, double rho, double c0, double c1,
                       double c2);

}  // namespace trikurve
