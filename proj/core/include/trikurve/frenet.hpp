#pragma once

#include <vector>

#include "trikurve/differentiation.hpp"
#include "trikurve/geometry.hpp"
#include "trikurve/profile.hpp"
#include "trikurve/surface_ode.hpp"

namespace trikurve {

// Below this curvature the Frenet frame is treated as undefined.
inline constexpr double kKappaTolerance = 1e-9;

// Per-sample Frenet apparatus; T, N, B in orthonormal-frame components.
struct FrenetApparatus {
  std::vector<double> s;
  std::vector<double> kappa;
  std::vector<double> tau;
  std::vector<Vec3> t;
  std::vector<Vec3> n;
  std::vector<Vec3> b;
  std::vector<bool> defined;
  // True where every stencil behind kappa and tau was central.
  std::vector<bool> interior;

  std::size_t size() const { return s.size(); }
};

struct Reconstruction {
  CurveSamples curve;
  FrenetApparatus frenet;
};

// Integrates alpha' = T, T' = k N, N' = -k T + t B, B' = -t N in R^3 with
// classical RK4 and Gram-Schmidt re-orthonormalization after every step.
// alpha(s0) = 0 and (T, N, B)(s0) = standard basis. The step is shrunk so an
// integer number of steps covers the interval.
Reconstruction reconstruct_r3(const FrenetProfile& profile, Interval interval, double step);

// kappa = |nabla_T T|, N = nabla_T T / kappa, B = T x N and
// tau = <nabla_T^2 T, B> / kappa. For surface models B is the formal third
// vector and tau = 0.
FrenetApparatus measure_frenet(const CurveSamples& curve,
                               const DifferentiationOptions& options = {});

// Frenet apparatus of a smooth curve in Euclidean R^3 from a ChebyshevFit of
// the positions: kappa = |a' x a''| / |a'|^3, tau = det(a', a'', a''') /
// |a' x a''|^2. All samples count as interior when the fit is resolved.
// Throws Unsupported for other models.
FrenetApparatus measure_frenet_spectral(const CurveSamples& curve);

// Triharmonicity of an R^3 curve as the directrix of its normal ruled surface:
// (kappa, tau) from measure_frenet_spectral, then kappa' .. kappa'''' by
// strided finite differences and the surface equations with K_S = -tau^2.
struct RuledDirectrixCheck {
  std::vector<double> s;
  std::vector<double> kappa;
  std::vector<double> tau;
  std::vector<SurfaceResidual> residual;
  // max over both equations of |res| / max(1, largest term)
  std::vector<double> relative;
  std::vector<bool> interior;
  int fit_degree = 0;
  double fit_residual = 0.0;
  bool fit_resolved = false;
  int stride = 1;
  // Over interior samples (all samples if none are interior).
  double max_relative() const;
};
RuledDirectrixCheck check_ruled_directrix(const CurveSamples& curve,
                                          const DifferentiationOptions& options = {});

// Data of the normal ruled surface along its directrix: K_S = -tau^2 and
// kappa_g = kappa.
struct DirectrixData {
  std::vector<double> s;
  std::vector<double> gauss_k;
  std::vector<double> kappa_g;
};
DirectrixData ruled_surface_directrix_data(const FrenetProfile& profile,
                                           const std::vector<double>& s);

// Circle of geodesic curvature kappa_g on SpaceForm2(rho) centred at the
// chart origin, sampled at n points of arc length spacing h starting at
// s = 0.
CurveSamples spaceform2_circle(double rho, double kappa_g, std::size_t n, double h);
// Arc length of that circle.
double spaceform2_circle_length(double rho, double kappa_g);

}  // namespace trikurve
