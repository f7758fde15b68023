#include "trikurve/parametrizer.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "trikurve/differentiation.hpp"
#include "trikurve/error.hpp"

namespace trikurve {
namespace {

namespace odeint = boost::numeric::odeint;
using Scalar1 = std::array<double, 1>;

constexpr double kUnitSpeedTol = 1e-6;

std::vector<double> grid(const Interval& iv, double step) {
  if (!(step > 0.0) || !(iv.hi > iv.lo)) {
    throw Error(ErrorCode::kInvalidArgument, "need step > 0 and a nonempty s-interval");
  }
  const auto n = static_cast<std::size_t>(std::ceil(iv.length() / step - 1e-9));
  std::vector<double> s(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    s[i] = iv.lo + iv.length() * static_cast<double>(i) / static_cast<double>(n);
  }
  s.back() = iv.hi;
  return s;
}

// Solves u' = f(u) on the grid with u(s[0]) = u0.
std::vector<double> integrate_scalar(const std::function<double(double)>& f, double u0,
                                     const std::vector<double>& s) {
  std::vector<double> out;
  out.reserve(s.size());
  Scalar1 u{u0};
  auto system = [&](const Scalar1& x, Scalar1& dx, double) { dx[0] = f(x[0]); };
  auto observer = [&](const Scalar1& x, double) { out.push_back(x[0]); };
  try {
    odeint::integrate_times(
        odeint::make_controlled(1e-14, 1e-13, odeint::runge_kutta_dopri5<Scalar1>()), system,
        u, s.begin(), s.end(), (s[1] - s[0]) * 0.1, observer);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::kBlowUp, std::string("integration failed: ") + e.what());
  }
  return out;
}

double unit_speed_error(const ManifoldModel& m, const std::vector<Vec3>& points,
                        const std::vector<Vec3>& velocity) {
  double err = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!in_chart(m, points[i])) {
      std::ostringstream os;
      os << "curve leaves the chart at sample " << i;
      throw Error(ErrorCode::kOutOfChart, os.str());
    }
    err = std::max(err, std::abs(to_frame(m, points[i], velocity[i]).norm() - 1.0));
  }
  return err;
}

void finish(HelixCurve& out, const std::vector<Vec3>& velocity) {
  out.unit_speed_error = unit_speed_error(out.curve.manifold, out.curve.points, velocity);
  if (!(out.unit_speed_error <= kUnitSpeedTol)) {
    std::ostringstream os;
    os << "emitted curve is not unit speed (max error " << out.unit_speed_error << ")";
    throw Error(ErrorCode::kNonUnitSpeed, os.str());
  }
}

void check_common(const HelixParam& p, bool need_nonzero_a) {
  if (!(std::sin(p.alpha0) > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "alpha0 must lie in (0, pi)");
  }
  if (!(p.zeta > 0.0)) throw Error(ErrorCode::kInvalidArgument, "zeta must be > 0");
  if (need_nonzero_a && p.a == 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "types (i)-(iii) need a != 0; use the Heisenberg form");
  }
}

double z_slope(const HelixParam& p) {
  return ((4.0 * p.a - p.b * p.b) * std::cos(p.alpha0) - p.b * p.zeta) / (4.0 * p.a);
}

// Shrinks the interval to 95% of a finite escape time measured from lo.
Interval truncate(const Interval& iv, double escape_length, HelixCurve& out) {
  if (std::isfinite(escape_length) && iv.lo + escape_length < iv.hi) {
    out.truncated = true;
    out.escape_s = iv.lo + escape_length;
    return Interval{iv.lo, iv.lo + 0.95 * escape_length};
  }
  return iv;
}

}  // namespace

std::string to_string(ParamType t) {
  switch (t) {
    case ParamType::kTypeI: return "type_i";
    case ParamType::kTypeII: return "type_ii";
    case ParamType::kTypeIII: return "type_iii";
    case ParamType::kHeisenberg: return "heisenberg";
  }
  return "unknown";
}

Mat3 frame_n3zero(double alpha0, double beta) {
  const double sa = std::sin(alpha0);
  const double ca = std::cos(alpha0);
  const double sb = std::sin(beta);
  const double cb = std::cos(beta);
  Mat3 f;
  f << sa * cb, sa * sb, ca,
       -sb, cb, 0.0,
       -ca * cb, -ca * sb, sa;
  return f;
}

std::vector<double> beta_ode_residual(const CurveSamples& curve, const std::vector<double>& beta,
                                      double a, double b, double alpha0, double zeta) {
  if (beta.size() != curve.size()) {
    throw Error(ErrorCode::kInvalidArgument, "beta samples do not match the curve");
  }
  const int accuracy = curve.size() >= 12 ? 8 : 2;
  const GridDifferentiator diff(curve.s, 1, accuracy);
  const std::vector<double> dbeta = diff.apply(beta);
  const double sa = std::sin(alpha0);
  std::vector<double> r(curve.size());
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const Vec3& p = curve.points[i];
    r[i] = zeta - (dbeta[i] + 2.0 * a * sa * (p[1] * std::cos(beta[i]) - p[0] * std::sin(beta[i])) -
                   b * std::cos(alpha0));
  }
  return r;
}

double type_i_radius_squared(double a, double b, double alpha0, double zeta, double mu) {
  const double sa = std::sin(alpha0);
  return (mu / a) * ((b * std::cos(alpha0) + zeta - 1.0 / mu) + a * mu * sa * sa);
}

std::array<double, 2> type_i_offsets(double a, double b, double alpha0, double zeta, double mu,
                                     double phi) {
  const double r2 = type_i_radius_squared(a, b, alpha0, zeta, mu);
  if (r2 < 0.0) {
    std::ostringstream os;
    os << "type (i) constraint has no real (c1, c2): c1^2 + c2^2 = " << r2;
    throw Error(ErrorCode::kConstraintViolated, os.str());
  }
  const double r = std::sqrt(r2);
  return {r * std::cos(phi), r * std::sin(phi)};
}

HelixCurve parametrize_type_i(const HelixParam& p) {
  check_common(p, true);
  if (!(p.mu > 0.0)) throw Error(ErrorCode::kInvalidArgument, "type (i) needs mu > 0");
  const double r2 = type_i_radius_squared(p.a, p.b, p.alpha0, p.zeta, p.mu);
  const double lhs = p.c1 * p.c1 + p.c2 * p.c2;
  if (r2 < 0.0 || std::abs(lhs - r2) > 1e-12 * std::max(1.0, std::abs(r2))) {
    std::ostringstream os;
    os << "type (i) constraint violated: c1^2 + c2^2 = " << lhs << ", required " << r2;
    throw Error(ErrorCode::kConstraintViolated, os.str());
  }
  HelixCurve out;
  out.param = p;
  out.param.type = ParamType::kTypeI;
  out.curve.manifold = ManifoldModel::bcv(p.a, p.b);
  const double sa = std::sin(p.alpha0);
  const double ca = std::cos(p.alpha0);
  auto dbeta = [&](double beta) {
    return p.zeta + p.b * ca +
           2.0 * p.a * sa * (p.mu * sa - p.c2 * std::cos(beta) + p.c1 * std::sin(beta));
  };
  if (std::abs(dbeta(p.beta_init)) < 1e-12) {
    throw Error(ErrorCode::kInvalidArgument,
                "beta' vanishes at beta_init: the solution is constant (types (ii)/(iii))");
  }
  const std::vector<double> s = grid(p.interval, p.step);
  out.beta = integrate_scalar(dbeta, p.beta_init, s);
  const double slope = z_slope(p);
  std::vector<Vec3> velocity(s.size());
  out.curve.s = s;
  out.curve.points.resize(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double be = out.beta[i];
    const double db = dbeta(be);
    out.curve.points[i] = Vec3(p.mu * sa * std::sin(be) + p.c1, -p.mu * sa * std::cos(be) + p.c2,
                               p.b / (4.0 * p.a) * be + slope * s[i]);
    velocity[i] = Vec3(p.mu * sa * std::cos(be) * db, p.mu * sa * std::sin(be) * db,
                       p.b / (4.0 * p.a) * db + slope);
  }
  finish(out, velocity);
  return out;
}

HelixCurve parametrize_type_ii(const HelixParam& p) {
  check_common(p, true);
  const double sb = std::sin(p.beta0);
  const double cb = std::cos(p.beta0);
  if (std::abs(sb * cb) < 1e-12) {
    throw Error(ErrorCode::kInvalidArgument, "type (ii) needs sin(beta0) cos(beta0) != 0");
  }
  HelixCurve out;
  out.param = p;
  out.param.type = ParamType::kTypeII;
  out.curve.manifold = ManifoldModel::bcv(p.a, p.b);
  const double sa = std::sin(p.alpha0);
  const double ca = std::cos(p.alpha0);
  const double tb = sb / cb;
  const double c1 = (p.zeta + p.b * ca) / (2.0 * p.a * sa * cb);
  out.param.c1 = c1;
  const double k = sa * cb;
  auto dx = [&](double x) {
    const double y = x * tb + c1;
    return (1.0 + p.a * (x * x + y * y)) * k;
  };
  if (!in_chart(out.curve.manifold, Vec3(p.x_init, p.x_init * tb + c1, 0.0))) {
    throw Error(ErrorCode::kOutOfChart, "type (ii) start point lies outside the chart");
  }
  double escape = std::numeric_limits<double>::infinity();
  if (p.a > 0.0) {
    // x' = K (w^2 + m^2) with w = x + t c1 / (1 + t^2).
    const double q = 1.0 + tb * tb;
    const double kk = k * p.a * q;
    const double shift = tb * c1 / q;
    const double m2 = (1.0 + p.a * c1 * c1) / (p.a * q) - shift * shift;
    const double m = std::sqrt(m2);
    const double w0 = p.x_init + shift;
    const double sg = kk > 0.0 ? 1.0 : -1.0;
    escape = (std::numbers::pi / 2.0 - sg * std::atan(w0 / m)) / (std::abs(kk) * m);
  }
  const Interval iv = truncate(p.interval, escape, out);
  out.param.interval = iv;
  const std::vector<double> s = grid(iv, p.step);
  if (s.size() < 3) throw Error(ErrorCode::kBlowUp, "type (ii) solution escapes immediately");
  const std::vector<double> x = integrate_scalar(dx, p.x_init, s);
  const double slope = z_slope(p);
  std::vector<Vec3> velocity(s.size());
  out.curve.s = s;
  out.curve.points.resize(s.size());
  out.beta.assign(s.size(), p.beta0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    out.curve.points[i] = Vec3(x[i], x[i] * tb + c1, slope * s[i] + p.c2);
    const double v = dx(x[i]);
    velocity[i] = Vec3(v, v * tb, slope);
  }
  finish(out, velocity);
  return out;
}

HelixCurve parametrize_type_iii(const HelixParam& p) {
  check_common(p, true);
  if (p.sign != 1 && p.sign != -1) {
    throw Error(ErrorCode::kInvalidArgument, "type (iii) sign must be +1 or -1");
  }
  HelixCurve out;
  out.param = p;
  out.param.type = ParamType::kTypeIII;
  out.curve.manifold = ManifoldModel::bcv(p.a, p.b);
  const double sa = std::sin(p.alpha0);
  const double ca = std::cos(p.alpha0);
  const double sigma = p.sign;
  // beta0 = sigma pi/2 makes the tangent (0, sigma sin(alpha0), cos(alpha0)),
  // so the lower sign runs along the negative branch of y'.
  out.param.beta0 = sigma * std::numbers::pi / 2.0;
  out.param.x0 = -sigma * (p.zeta + p.b * ca) / (2.0 * p.a * sa);
  const double x0 = out.param.x0;
  const double big_a = 1.0 + p.a * x0 * x0;
  if (!in_chart(out.curve.manifold, Vec3(x0, p.y_init, 0.0))) {
    throw Error(ErrorCode::kOutOfChart, "type (iii) start point lies outside the chart");
  }
  auto dy = [&](double y) { return sigma * (1.0 + p.a * (x0 * x0 + y * y)) * sa; };
  double escape = std::numeric_limits<double>::infinity();
  if (p.a > 0.0) {
    const double theta0 = std::atan(p.y_init * std::sqrt(p.a / big_a));
    escape = (std::numbers::pi / 2.0 - sigma * theta0) / (std::sqrt(p.a * big_a) * sa);
  }
  const Interval iv = truncate(p.interval, escape, out);
  out.param.interval = iv;
  const std::vector<double> s = grid(iv, p.step);
  if (s.size() < 3) throw Error(ErrorCode::kBlowUp, "type (iii) solution escapes immediately");
  const std::vector<double> y = integrate_scalar(dy, p.y_init, s);
  const double slope = z_slope(p);
  std::vector<Vec3> velocity(s.size());
  out.curve.s = s;
  out.curve.points.resize(s.size());
  out.beta.assign(s.size(), out.param.beta0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    out.curve.points[i] = Vec3(x0, y[i], slope * s[i] + p.c1);
    velocity[i] = Vec3(0.0, dy(y[i]), slope);
  }
  finish(out, velocity);
  return out;
}

double type_iii_closed_form(const HelixParam& d, double s) {
  const double sa = std::sin(d.alpha0);
  const double sigma = d.sign;
  const double big_a = 1.0 + d.a * d.x0 * d.x0;
  const double ds = s - d.interval.lo;
  if (d.a > 0.0) {
    const double r = std::sqrt(big_a / d.a);
    const double theta0 = std::atan(d.y_init / r);
    return r * std::tan(sigma * std::sqrt(d.a * big_a) * sa * ds + theta0);
  }
  const double na = -d.a;
  const double r = std::sqrt(big_a / na);
  const double theta0 = std::atanh(d.y_init / r);
  return r * std::tanh(sigma * std::sqrt(na * big_a) * sa * ds + theta0);
}

HelixCurve parametrize_heisenberg(const HelixParam& p) {
  check_common(p, false);
  if (p.a != 0.0) throw Error(ErrorCode::kInvalidArgument, "the Heisenberg form needs a = 0");
  HelixCurve out;
  out.param = p;
  out.param.type = ParamType::kHeisenberg;
  out.curve.manifold = ManifoldModel::bcv(0.0, p.b);
  const double sa = std::sin(p.alpha0);
  const double ca = std::cos(p.alpha0);
  const double w = p.zeta + p.b * ca;
  if (std::abs(w) <= 1e-14 * std::max({1.0, p.zeta, std::abs(p.b)})) {
    std::ostringstream os;
    os << "zeta + b cos(alpha0) = 0 (b = " << p.b << ", alpha0 = " << p.alpha0
       << ", zeta = " << p.zeta << ")";
    throw Error(ErrorCode::kDivisionByZero, os.str());
  }
  const double sl = std::sin(p.lambda);
  const double cl = std::cos(p.lambda);
  const double zlin = ((2.0 * p.zeta + p.b * ca) * ca + p.b) / (2.0 * w);
  const double zosc = p.b * sa * sa / (2.0 * w * w);
  const std::vector<double> s = grid(p.interval, p.step);
  std::vector<Vec3> velocity(s.size());
  out.curve.s = s;
  out.curve.points.resize(s.size());
  out.beta.resize(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double be = w * s[i] + p.lambda;
    const double sb = std::sin(be);
    const double cb = std::cos(be);
    out.beta[i] = be;
    const double x = sa / w * (sb - sl);
    const double y = -sa / w * (cb - cl);
    out.curve.points[i] = Vec3(x, y, zlin * s[i] + zosc * (sl * cb - cl * sb));
    velocity[i] = Vec3(sa * cb, sa * sb, ca + p.b / 2.0 * sa * (x * sb - y * cb));
  }
  finish(out, velocity);
  return out;
}

HelixCurve parametrize(const HelixParam& p) {
  switch (p.type) {
    case ParamType::kTypeI: return parametrize_type_i(p);
    case ParamType::kTypeII: return parametrize_type_ii(p);
    case ParamType::kTypeIII: return parametrize_type_iii(p);
    case ParamType::kHeisenberg: return parametrize_heisenberg(p);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown parametrization type");
}

}  // namespace trikurve
