#pragma once

#include <array>
#include <vector>

#include "trikurve/differentiation.hpp"
#include "trikurve/geometry.hpp"

namespace trikurve {

// d[k][i] = nabla_T^k T at sample i in orthonormal-frame components, with
// d[0] = T. interior[k][i] is true where every stencil feeding d[k][i] was
// central.
struct CovariantJet {
  std::vector<double> s;
  std::vector<std::vector<Vec3>> d;
  std::vector<std::vector<bool>> interior;
  int stride = 1;
  int accuracy = 8;
};

// Feature size used to pick the stencil stride: 1 / max(1, max curvature),
// with the curvature estimated from coarse second differences.
double curve_length_scale(const CurveSamples& curve);

CovariantJet covariant_derivatives(const CurveSamples& curve, int k_max,
                                   const DifferentiationOptions& options = {});

enum class TensionMethod { kExactHelix, kFiniteDifference };

struct TensionReport {
  int order = 3;
  TensionMethod method = TensionMethod::kFiniteDifference;
  std::vector<double> s;
  // Residual along the measured Frenet frame (T, N, B); where the frame is
  // undefined the frame-component residual is stored as (res_T, res_N, res_B)
  // in the ambient orthonormal frame instead.
  std::vector<double> res_t;
  std::vector<double> res_n;
  std::vector<double> res_b;
  std::vector<double> residual_norm;
  // Largest norm among the terms of tau_r at each sample.
  std::vector<double> term_scale;
  std::vector<bool> frame_defined;
  std::vector<bool> interior;

  // |res| / max(1, term_scale), per sample.
  double relative(std::size_t i) const;
  // Summaries over interior samples (all samples if none are interior).
  double max_relative() const;
  double mean_relative() const;
  double max_abs() const;
};

// r-tension: r = 1 nabla_T T; r = 2 nabla^3 T + R(nabla T, T) T;
// r = 3 nabla^5 T + R(nabla^3 T, T) T - R(nabla^2 T, nabla T) T.
TensionReport tension_r(const CurveSamples& curve, int r,
                        const DifferentiationOptions& options = {});

// Frenet-frame components of tau_3 for a helix with constant curvature
// kappa0 > 0 and torsion tau0. normal and binormal are the left-hand sides of
//   (k^2+t^2)^2 - (2k^2+t^2) <R(N,T)T,N> - k t <R(B,N)T,N> = 0,
//   (2k^2+t^2) <R(N,T)T,B> + k t <R(B,N)T,B> = 0,
// and tangent is identically 0. vertical = (T3, N3, B3) is the vertical
// projection of the Frenet frame; it is ignored on space forms.
struct HelixResidual {
  double tangent = 0.0;
  double normal = 0.0;
  double binormal = 0.0;
};
HelixResidual helix_tension_exact(const ManifoldModel& m, double kappa0, double tau0,
                                  const Vec3& vertical = Vec3(0.0, 0.0, 1.0));

// nabla_T^k T, k = 0..5, for a helix in Frenet components (T, N, B).
std::array<Vec3, 6> helix_covariant_derivatives(double kappa0, double tau0);

// An orthonormal Frenet frame (rows T, N, B in frame components) whose third
// components are the given vertical projections.
Mat3 frenet_frame_with_vertical(const Vec3& vertical);

}  // namespace trikurve
