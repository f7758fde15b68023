#include "trikurve/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "trikurve/differentiation.hpp"
#include "trikurve/error.hpp"
#include "trikurve/frenet.hpp"
#include "trikurve/tension.hpp"

namespace trikurve {

std::string to_string(HelixClass c) {
  switch (c) {
    case HelixClass::kGeodesic: return "Geodesic";
    case HelixClass::kSurfaceCircle: return "SurfaceCircle";
    case HelixClass::kSpaceFormHelix: return "SpaceFormHelix";
    case HelixClass::kBcvZeroTorsion: return "BcvZeroTorsion";
    case HelixClass::kBcvHopfHelix: return "BcvHopfHelix";
  }
  return "Unknown";
}

namespace {

HelixSolution geodesic(const ManifoldModel& m) {
  HelixSolution g;
  g.ambient = m;
  g.tag = HelixClass::kGeodesic;
  g.reason = "geodesic (harmonic, not proper)";
  return g;
}

}  // namespace

std::vector<HelixSolution> classify_surface(double gauss_k) {
  const ManifoldModel m = ManifoldModel::space_form2(gauss_k);
  std::vector<HelixSolution> out{geodesic(m)};
  if (gauss_k > 0.0) {
    HelixSolution c;
    c.ambient = m;
    c.tag = HelixClass::kSurfaceCircle;
    c.kappa0 = std::sqrt(2.0 * gauss_k);
    const double k = c.kappa0;
    c.residual_normal = std::pow(k, 5) - 2.0 * gauss_k * k * k * k;
    c.reason = "kappa_g^2 = 2 K_S";
    out.push_back(c);
  }
  return out;
}

std::vector<HelixSolution> classify_spaceform(double rho, double tau0) {
  const ManifoldModel m = ManifoldModel::space_form3(rho);
  std::vector<HelixSolution> out{geodesic(m)};
  const double d = rho - tau0 * tau0;
  const double radicand = rho * d;
  for (int branch : {+1, -1}) {
    HelixSolution h;
    h.ambient = m;
    h.tag = HelixClass::kSpaceFormHelix;
    h.tau0 = tau0;
    h.note = branch > 0 ? "plus branch" : "minus branch";
    if (radicand < 0.0 || d < 0.0) {
      h.kappa0 = std::numeric_limits<double>::quiet_NaN();
      h.admissible = false;
      h.reason = "no real solution (needs rho > 0 and rho >= tau0^2)";
      out.push_back(h);
      continue;
    }
    const double k2 = d + branch * std::sqrt(radicand);
    if (!(k2 > 0.0)) {
      h.kappa0 = 0.0;
      h.admissible = false;
      h.reason = k2 == 0.0 ? "kappa0 = 0 (geodesic)" : "kappa0^2 < 0";
      out.push_back(h);
      continue;
    }
    h.kappa0 = std::sqrt(k2);
    const HelixResidual r = helix_tension_exact(m, h.kappa0, tau0);
    h.residual_normal = r.normal;
    h.residual_binormal = r.binormal;
    h.reason = "proper triharmonic helix";
    out.push_back(h);
  }
  return out;
}

std::array<double, 2> bcv_helix_equations(double a, double b, double k, double t, double t3,
                                          double n3, double b3) {
  const double c = 4.0 * a - b * b;
  const double w = k * k + t * t;
  const double u = 2.0 * k * k + t * t;
  return {w * w - u * (b * b / 4.0 + c * b3 * b3) - k * t * c * t3 * b3,
          u * n3 * b3 + k * t * t3 * n3};
}

HelixSolution bcv_zero_torsion(double a, double b, double b3) {
  const ManifoldModel m = ManifoldModel::bcv(a, b);
  if (!(std::abs(b3) <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "B3 must lie in [-1, 1]");
  }
  HelixSolution h;
  h.ambient = m;
  h.tag = HelixClass::kBcvZeroTorsion;
  h.tau0 = 0.0;
  h.b3 = b3;
  const double c = 4.0 * a - b * b;
  const double k2 = 2.0 * (b * b / 4.0 + c * b3 * b3);
  h.kappa0 = k2 > 0.0 ? std::sqrt(k2) : 0.0;
  std::vector<std::string> fails;
  if (!(k2 > 0.0)) fails.push_back("kappa0^2 <= 0");
  if (b * b > 4.0 * a && !(b3 * b3 < b * b / (4.0 * (b * b - 4.0 * a)))) {
    fails.push_back("b^2 > 4a requires B3^2 < b^2 / (4 (b^2 - 4a))");
  }
  if (b * b < 4.0 * a && b3 == 0.0) {
    fails.push_back("b^2 < 4a requires B3 != 0");
    if (k2 > 0.0) {
      h.note = "excluded case B3 = 0 with b^2 < 4a still gives kappa0^2 = b^2/2 > 0";
    }
  }
  h.admissible = fails.empty();
  for (std::size_t i = 0; i < fails.size(); ++i) h.reason += (i ? "; " : "") + fails[i];
  if (h.admissible) h.reason = "proper triharmonic helix with vanishing torsion";
  const auto eq = bcv_helix_equations(a, b, h.kappa0, 0.0, std::sqrt(1.0 - b3 * b3), 0.0, b3);
  h.residual_normal = eq[0];
  h.residual_binormal = eq[1];
  return h;
}

std::array<double, 5> p4_coefficients(double a, double b, double alpha0) {
  const double c = 4.0 * a - b * b;
  const double ca = std::cos(alpha0);
  const double sa = std::sin(alpha0);
  const double s2 = sa * sa;
  return {-b * b * c * s2,
          b * (b * b - 2.0 * c * s2) * ca,
          5.0 * b * b * ca * ca - 8.0 * c * s2 * s2,
          8.0 * b * ca,
          4.0};
}

double p4_eval(double a, double b, double alpha0, double zeta) {
  const auto c = p4_coefficients(a, b, alpha0);
  return poly_eval(c, zeta);
}

std::vector<PolynomialRoot> p4_roots(double a, double b, double alpha0) {
  (void)ManifoldModel::bcv(a, b);
  if (!(std::sin(alpha0) > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "alpha0 must lie in (0, pi)");
  }
  const auto c = p4_coefficients(a, b, alpha0);
  return positive_roots(c);
}

HelixSolution helix_from_root(double a, double b, double alpha0, double zeta) {
  const ManifoldModel m = ManifoldModel::bcv(a, b);
  if (!(zeta > 0.0)) throw Error(ErrorCode::kInvalidArgument, "zeta must be > 0");
  HelixSolution h;
  h.ambient = m;
  h.tag = HelixClass::kBcvHopfHelix;
  h.zeta = zeta;
  h.alpha0 = alpha0;
  h.kappa0 = zeta * std::sin(alpha0);
  h.tau0 = -zeta * std::cos(alpha0) - b / 2.0;
  h.b3 = std::sin(alpha0);
  const double t3 = std::cos(alpha0);
  const auto eq = bcv_helix_equations(a, b, h.kappa0, h.tau0, t3, 0.0, h.b3);
  h.residual_normal = eq[0];
  h.residual_binormal = eq[1];
  const double c = 4.0 * a - b * b;
  const double k2 = h.kappa0 * h.kappa0;
  const double t2 = h.tau0 * h.tau0;
  const double scale = std::max({1.0, (k2 + t2) * (k2 + t2),
                                 std::abs((2.0 * k2 + t2) * (b * b / 4.0 + c * h.b3 * h.b3)),
                                 std::abs(h.kappa0 * h.tau0 * c * t3 * h.b3)});
  if (std::abs(eq[0]) > 1e-8 * scale) {
    std::ostringstream os;
    os << "zeta = " << zeta << " does not satisfy the helix equation (residual " << eq[0] << ")";
    throw Error(ErrorCode::kResidualTooLarge, os.str());
  }
  if (h.tau0 == 0.0) h.note = "vanishing torsion";
  h.reason = "proper triharmonic helix with N3 = 0 (geodesic of a Hopf cylinder)";
  return h;
}

N3Dichotomy n3_dichotomy_check(const CurveSamples& curve, double tol) {
  if (curve.manifold.as<Bcv>() == nullptr) {
    throw Error(ErrorCode::kUnsupported, "n3_dichotomy_check needs a BCV curve");
  }
  const FrenetApparatus f = measure_frenet(curve);
  const std::size_t n = f.size();
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < n; ++i) {
    if (f.interior[i]) idx.push_back(i);
  }
  if (idx.empty()) {
    for (std::size_t i = 0; i < n; ++i) idx.push_back(i);
  }
  double kmax = 0.0;
  for (std::size_t i : idx) {
    if (!(f.kappa[i] > 1e-6)) {
      throw Error(ErrorCode::kGeodesicInput, "curvature vanishes along the curve");
    }
    kmax = std::max(kmax, f.kappa[i]);
  }
  std::vector<double> t3(n);
  for (std::size_t i = 0; i < n; ++i) t3[i] = f.t[i][2];
  const int stride = auto_stride(curve.s, curve_length_scale(curve), 8, 4, 1e-14);
  const GridDifferentiator diff(curve.s, stride, 8);
  const std::vector<double> dt3 = diff.apply(t3);
  N3Dichotomy r;
  double mean = 0.0;
  for (std::size_t i : idx) mean += t3[i];
  mean /= static_cast<double>(idx.size());
  for (std::size_t i : idx) {
    r.t3_variation = std::max(r.t3_variation, std::abs(t3[i] - mean));
    r.n3_max = std::max(r.n3_max, std::abs(f.n[i][2]));
    r.derivative_residual =
        std::max(r.derivative_residual, std::abs(dt3[i] - f.kappa[i] * f.n[i][2]));
  }
  r.t3_constant = r.t3_variation <= tol;
  r.n3_zero = r.n3_max <= tol;
  r.holds = r.t3_constant == r.n3_zero && r.derivative_residual <= tol * std::max(1.0, kmax);
  return r;
}

}  // namespace trikurve
