#include "trikurve/frenet.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "trikurve/error.hpp"
#include "trikurve/tension.hpp"

namespace trikurve {
namespace {

using State = std::array<double, 12>;

Vec3 block(const State& x, int k) { return Vec3(x[3 * k], x[3 * k + 1], x[3 * k + 2]); }

void set_block(State& x, int k, const Vec3& v) {
  for (int j = 0; j < 3; ++j) x[3 * k + j] = v[j];
}

void reorthonormalize(State& x) {
  Vec3 t = block(x, 1).normalized();
  Vec3 n = block(x, 2);
  n = (n - n.dot(t) * t).normalized();
  Vec3 b = block(x, 3);
  b = (b - b.dot(t) * t - b.dot(n) * n).normalized();
  set_block(x, 1, t);
  set_block(x, 2, n);
  set_block(x, 3, b);
}

}  // namespace

Reconstruction reconstruct_r3(const FrenetProfile& profile, Interval interval, double step) {
  if (!(step > 0.0) || !(interval.hi > interval.lo)) {
    throw Error(ErrorCode::kInvalidArgument, "reconstruct_r3: need step > 0 and a nonempty interval");
  }
  const Interval dom = profile.domain();
  if (!dom.contains(interval.lo) || !dom.contains(interval.hi) ||
      (dom.lo == 0.0 && !(interval.lo > 0.0))) {
    throw Error(ErrorCode::kOutOfChart, "reconstruct_r3: interval outside the profile domain");
  }
  const auto steps = static_cast<std::size_t>(std::ceil(interval.length() / step - 1e-9));
  const double h = interval.length() / static_cast<double>(steps);

  auto curvature = [&](double s) {
    const double k = profile.kappa(s);
    if (!(k > 0.0)) {
      std::ostringstream os;
      os << "curvature vanishes at s = " << s;
      throw Error(ErrorCode::kCurvatureVanishes, os.str());
    }
    return k;
  };
  auto system = [&](const State& x, State& dx, double s) {
    const double k = curvature(s);
    const double t = profile.tau(s);
    const Vec3 tt = block(x, 1);
    const Vec3 nn = block(x, 2);
    const Vec3 bb = block(x, 3);
    set_block(dx, 0, tt);
    set_block(dx, 1, k * nn);
    set_block(dx, 2, -k * tt + t * bb);
    set_block(dx, 3, -t * nn);
  };

  Reconstruction out;
  CurveSamples& c = out.curve;
  FrenetApparatus& f = out.frenet;
  c.manifold = ManifoldModel::space_form3(0.0);
  auto record = [&](const State& x, double s) {
    c.s.push_back(s);
    c.points.push_back(block(x, 0));
    f.s.push_back(s);
    f.kappa.push_back(curvature(s));
    f.tau.push_back(profile.tau(s));
    f.t.push_back(block(x, 1));
    f.n.push_back(block(x, 2));
    f.b.push_back(block(x, 3));
    f.defined.push_back(true);
    f.interior.push_back(true);
  };

  State x{};
  set_block(x, 1, Vec3::UnitX());
  set_block(x, 2, Vec3::UnitY());
  set_block(x, 3, Vec3::UnitZ());
  boost::numeric::odeint::runge_kutta4<State> rk4;
  record(x, interval.lo);
  for (std::size_t i = 0; i < steps; ++i) {
    const double s = interval.lo + h * static_cast<double>(i);
    rk4.do_step(system, x, s, h);
    reorthonormalize(x);
    record(x, i + 1 == steps ? interval.hi : interval.lo + h * static_cast<double>(i + 1));
  }
  return out;
}

FrenetApparatus measure_frenet(const CurveSamples& curve, const DifferentiationOptions& options) {
  if (curve.size() < 7) {
    throw Error(ErrorCode::kTooFewSamples, "measure_frenet needs at least 7 samples");
  }
  DifferentiationOptions opt = options;
  // Short curves cannot carry the default wide stencils.
  while (opt.accuracy > 2 && curve.size() < static_cast<std::size_t>(opt.accuracy + 3)) {
    opt.accuracy -= 2;
  }
  const CovariantJet jet = covariant_derivatives(curve, 2, opt);
  const bool surface = curve.manifold.is_surface();
  FrenetApparatus f;
  const std::size_t n = curve.size();
  f.s = curve.s;
  f.kappa.resize(n);
  f.tau.resize(n);
  f.t.resize(n);
  f.n.resize(n);
  f.b.resize(n);
  f.defined.resize(n);
  f.interior = jet.interior[2];
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 t = jet.d[0][i];
    const double k = jet.d[1][i].norm();
    f.t[i] = t;
    f.kappa[i] = k;
    if (k > kKappaTolerance) {
      const Vec3 nn = jet.d[1][i] / k;
      const Vec3 bb = t.normalized().cross(nn);
      f.n[i] = nn;
      f.b[i] = bb;
      f.tau[i] = surface ? 0.0 : jet.d[2][i].dot(bb) / k;
      f.defined[i] = true;
    } else {
      f.n[i] = Vec3::Zero();
      f.b[i] = Vec3::Zero();
      f.tau[i] = 0.0;
      f.defined[i] = false;
    }
  }
  return f;
}

FrenetApparatus measure_frenet_spectral(const CurveSamples& curve) {
  const auto* e = curve.manifold.as<SpaceForm3>();
  if (e == nullptr || e->rho != 0.0) {
    throw Error(ErrorCode::kUnsupported, "spectral Frenet measurement needs Euclidean R^3");
  }
  curve.validate();
  const ChebyshevFit fit(curve.s, curve.points);
  const std::size_t n = curve.size();
  FrenetApparatus f;
  f.s = curve.s;
  f.kappa.resize(n);
  f.tau.resize(n);
  f.t.resize(n);
  f.n.resize(n);
  f.b.resize(n);
  f.defined.resize(n);
  f.interior.assign(n, fit.resolved());
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 d1 = fit.derivative(curve.s[i], 1);
    const Vec3 d2 = fit.derivative(curve.s[i], 2);
    const Vec3 d3 = fit.derivative(curve.s[i], 3);
    const Vec3 x = d1.cross(d2);
    const double speed = d1.norm();
    f.t[i] = d1 / speed;
    f.kappa[i] = x.norm() / (speed * speed * speed);
    if (f.kappa[i] > kKappaTolerance) {
      f.b[i] = x.normalized();
      f.n[i] = f.b[i].cross(f.t[i]);
      f.tau[i] = x.dot(d3) / x.squaredNorm();
      f.defined[i] = true;
    } else {
      f.n[i] = Vec3::Zero();
      f.b[i] = Vec3::Zero();
      f.tau[i] = 0.0;
      f.defined[i] = false;
    }
  }
  return f;
}

double RuledDirectrixCheck::max_relative() const {
  double m = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < relative.size(); ++i) {
    if (interior[i]) {
      m = std::max(m, relative[i]);
      any = true;
    }
  }
  if (!any) {
    for (double r : relative) m = std::max(m, r);
  }
  return m;
}

RuledDirectrixCheck check_ruled_directrix(const CurveSamples& curve,
                                          const DifferentiationOptions& options) {
  const FrenetApparatus f = measure_frenet_spectral(curve);
  const ChebyshevFit fit(curve.s, curve.points);
  RuledDirectrixCheck out;
  out.s = f.s;
  out.kappa = f.kappa;
  out.tau = f.tau;
  out.fit_degree = fit.degree();
  out.fit_residual = fit.residual();
  out.fit_resolved = fit.resolved();
  const std::size_t n = f.size();
  double kmax = 0.0;
  for (double k : f.kappa) kmax = std::max(kmax, k);
  int accuracy = options.accuracy;
  while (accuracy > 2 && n < static_cast<std::size_t>(accuracy + 6)) accuracy -= 2;
  out.stride = options.stride > 0
                   ? options.stride
                   : auto_stride(f.s, 1.0 / std::max(1.0, kmax), accuracy, 4, options.noise);
  std::array<std::vector<double>, 5> d;
  d[0] = f.kappa;
  out.interior = f.interior;
  for (int k = 1; k <= 4; ++k) {
    const GridDifferentiator g(f.s, out.stride, accuracy, k);
    d[static_cast<std::size_t>(k)] = g.apply(f.kappa);
    for (std::size_t i = 0; i < n; ++i) out.interior[i] = out.interior[i] && g.central()[i];
  }
  out.residual.resize(n);
  out.relative.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::array<double, 5> jet{d[0][i], d[1][i], d[2][i], d[3][i], d[4][i]};
    const SurfaceResidual r = surface_residual(jet, -f.tau[i] * f.tau[i]);
    out.residual[i] = r;
    out.relative[i] = std::max(std::abs(r.res1) / std::max(1.0, r.scale1),
                               std::abs(r.res2) / std::max(1.0, r.scale2));
  }
  return out;
}

DirectrixData ruled_surface_directrix_data(const FrenetProfile& profile,
                                           const std::vector<double>& s) {
  DirectrixData d;
  d.s = s;
  d.gauss_k.reserve(s.size());
  d.kappa_g.reserve(s.size());
  for (double si : s) {
    const double k = profile.kappa(si);
    if (!(k > 0.0)) {
      std::ostringstream os;
      os << "curvature vanishes at s = " << si;
      throw Error(ErrorCode::kCurvatureVanishes, os.str());
    }
    const double t = profile.tau(si);
    d.gauss_k.push_back(-t * t);
    d.kappa_g.push_back(k);
  }
  return d;
}

namespace {

double chart_radius(double rho, double kappa_g) {
  if (!(kappa_g > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "circle needs kappa_g > 0");
  }
  const double c = rho / 4.0;
  if (c == 0.0) return 1.0 / kappa_g;
  const double disc = kappa_g * kappa_g + 4.0 * c;
  if (disc < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "no circle of this geodesic curvature (kappa_g^2 < -rho)");
  }
  return 2.0 / (kappa_g + std::sqrt(disc));
}

}  // namespace

double spaceform2_circle_length(double rho, double kappa_g) {
  const double r = chart_radius(rho, kappa_g);
  return 2.0 * std::numbers::pi * r / (1.0 + rho / 4.0 * r * r);
}

CurveSamples spaceform2_circle(double rho, double kappa_g, std::size_t n, double h) {
  const double r = chart_radius(rho, kappa_g);
  const double omega = (1.0 + rho / 4.0 * r * r) / r;
  CurveSamples c;
  c.manifold = ManifoldModel::space_form2(rho);
  c.s.resize(n);
  c.points.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = h * static_cast<double>(i);
    c.s[i] = s;
    c.points[i] = Vec3(r * std::cos(omega * s), r * std::sin(omega * s), 0.0);
  }
  return c;
}

}  // namespace trikurve
