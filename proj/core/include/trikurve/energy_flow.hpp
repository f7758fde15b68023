#pragma once

#include <functional>
#include <vector>

#include "trikurve/geometry.hpp"

namespace trikurve {

// Polyline in chart coordinates with a fixed parameter spacing h. The discrete
// trienergy is the parametrized energy
//   E = (1/2) sum_i |Z_i|^2 h,
//   V = gamma'(t), W = nabla_V V, Z = nabla_V W,
// with central differences in t of frame components (stencil i-3 .. i+3).
// Closed curves are periodic; open curves clamp their first and last two
// vertices.
struct FlowState {
  std::vector<Vec3> points;
  ManifoldModel manifold = ManifoldModel::space_form2(1.0);
  bool closed = true;
  double h = 0.0;
  double penalty_weight = 0.0;
  double energy = 0.0;   // trienergy part
  double penalty = 0.0;  // speed penalty part
  std::vector<Vec3> gradient;
  double step = 1e-3;
  int iteration = 0;
};

struct EnergyParts {
  double trienergy = 0.0;
  double penalty = 0.0;
  double total() const { return trienergy + penalty; }
};

// Builds a state with h = mean metric segment length and, if weight <= 0,
// penalty weight 10 * E / L (floored at 1e-12).
FlowState make_flow_state(std::vector<Vec3> points, const ManifoldModel& m, bool closed,
                          double penalty_weight = 0.0);

// Closed circle of geodesic curvature kappa_g on SpaceForm2(rho), n vertices.
FlowState circle_flow_state(double rho, double kappa_g, std::size_t n,
                            double penalty_weight = 0.0);

// Throws TooFewVertices (< 9), NonUniform (segment ratio > 1.5) or
// Unsupported for ruled surfaces.
EnergyParts discrete_trienergy(const FlowState& state);

// Gradient of the total energy with respect to the chart coordinates of each
// vertex (forward-mode automatic differentiation). Clamped vertices and the
// unused coordinate of surface models get zero.
std::vector<Vec3> trienergy_gradient(const FlowState& state);
// Same by finite differences of discrete_trienergy (forward differences
// with step rel_step * max(1, |x|); central when central is true).
std::vector<Vec3> trienergy_gradient_fd(const FlowState& state, double rel_step = 1e-7,
                                        bool central = false);

// max_i |G^{-1} dE/dx_i|_g / h, the pointwise size of the L2 gradient.
double gradient_norm(const FlowState& state, const std::vector<Vec3>& gradient);

struct CircleGradientProbe {
  std::size_t vertices = 0;
  double h = 0.0;
  double energy = 0.0;
  double gradient_norm = 0.0;
};

// Trienergy gradient norm (no penalty) at a regular N-gon on a circle of
// S^2(rho) with kappa_g^2 = kappa_sq, N = round(length / target_h). The
// circle's axis makes angle tilt with the chart centre, so tilt = 0 gives a
// chart-centred circle. Points and arithmetic use 113-bit floats, which keeps
// the h^-6 rounding amplification of the gradient below 1e-20 for h >= 5e-3.
// Throws InvalidArgument unless rho > 0, kappa_sq >= 0 and the circle avoids
// the chart's point at infinity.
CircleGradientProbe circle_gradient_probe(double rho, double kappa_sq, double target_h,
                                          double tilt);

// Resamples the polyline to equal metric segment lengths (h is kept).
FlowState respace(const FlowState& state);

struct FlowOptions {
  int max_iters = 50000;
  double grad_tol = 1e-8;
  double initial_step = 1e-3;
  int respace_every = 50;
  double min_step = 1e-20;
};

struct FlowLogRow {
  int iter = 0;
  double energy = 0.0;
  double grad_norm = 0.0;
  double step = 0.0;
};

struct FlowResult {
  FlowState final_state;
  std::vector<FlowLogRow> log;
  bool converged = false;
  bool line_search_failed = false;
  int respace_rejected = 0;  // re-spacings skipped because they raised the energy
};

using FlowCallback = std::function<void(const FlowState&)>;

// Gradient descent along the metric-raised gradient with backtracking (halve
// the step until the total energy decreases). Every respace_every iterations
// the curve is re-spaced, unless that would increase the energy.
FlowResult run_flow(FlowState initial, const FlowOptions& options = {},
                    const FlowCallback& on_iteration = {});

// Geodesic curvature of a closed surface curve: mean of |nabla_T T| over the
// re-spaced, periodically extended polyline.
double closed_curve_kappa(const FlowState& state);

}  // namespace trikurve
