#include "trikurve/tension.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "trikurve/error.hpp"

namespace trikurve {
namespace {

constexpr double kKappaTol = 1e-9;

double metric_norm(const ManifoldModel& m, const Vec3& p, const Vec3& chart_vector) {
  return to_frame(m, p, chart_vector).norm();
}

}  // namespace

double curve_length_scale(const CurveSamples& curve) {
  const std::size_t n = curve.size();
  if (n < 3) return 1.0;
  const std::size_t st = std::max<std::size_t>(1, (n - 1) / 200);
  if (2 * st > n - 1) return 1.0;
  double kmax = 0.0;
  for (std::size_t i = st; i + st < n; i += st) {
    const double h1 = curve.s[i] - curve.s[i - st];
    const double h2 = curve.s[i + st] - curve.s[i];
    const Vec3 a = 2.0 * ((curve.points[i + st] - curve.points[i]) / h2 -
                          (curve.points[i] - curve.points[i - st]) / h1) /
                   (h1 + h2);
    kmax = std::max(kmax, metric_norm(curve.manifold, curve.points[i], a));
  }
  return 1.0 / std::max(1.0, kmax);
}

CovariantJet covariant_derivatives(const CurveSamples& curve, int k_max,
                                   const DifferentiationOptions& options) {
  curve.validate();
  if (k_max < 1 || k_max > 5) {
    throw Error(ErrorCode::kInvalidArgument, "covariant_derivatives: k_max must be 1..5");
  }
  const std::size_t n = curve.size();
  if (n < static_cast<std::size_t>(2 * k_max + 3) ||
      n < static_cast<std::size_t>(options.accuracy + 2)) {
    throw Error(ErrorCode::kTooFewSamples, "covariant_derivatives: too few samples");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!in_chart(curve.manifold, curve.points[i])) {
      std::ostringstream os;
      os << "sample " << i << " lies outside the chart";
      throw Error(ErrorCode::kOutOfChart, os.str());
    }
  }
  const int depth = k_max + 1;
  const int stride =
      options.stride > 0
          ? options.stride
          : auto_stride(curve.s, curve_length_scale(curve), options.accuracy, depth, options.noise);
  const GridDifferentiator diff(curve.s, stride, options.accuracy);

  CovariantJet jet;
  jet.s = curve.s;
  jet.stride = diff.stride();
  jet.accuracy = options.accuracy;
  jet.d.assign(k_max + 1, std::vector<Vec3>(n));
  jet.interior.assign(k_max + 1, std::vector<bool>(n));

  const std::vector<Vec3> velocity = diff.apply(std::span<const Vec3>(curve.points));
  std::vector<ConnectionCoefficients> gamma(n);
  for (std::size_t i = 0; i < n; ++i) {
    jet.d[0][i] = to_frame(curve.manifold, curve.points[i], velocity[i]);
    gamma[i] = connection_in_frame(curve.manifold, curve.points[i]);
  }
  jet.interior[0] = diff.central();
  for (int k = 1; k <= k_max; ++k) {
    const std::vector<Vec3> dv = diff.apply(std::span<const Vec3>(jet.d[k - 1]));
    for (std::size_t i = 0; i < n; ++i) {
      jet.d[k][i] = dv[i] + gamma[i].apply(jet.d[0][i], jet.d[k - 1][i]);
    }
    jet.interior[k] = nest_interior(diff, jet.interior[k - 1]);
  }
  return jet;
}

double TensionReport::relative(std::size_t i) const {
  return residual_norm[i] / std::max(1.0, term_scale[i]);
}

namespace {

template <class F>
void for_summary(const TensionReport& r, F&& f) {
  const bool any = std::any_of(r.interior.begin(), r.interior.end(), [](bool b) { return b; });
  for (std::size_t i = 0; i < r.s.size(); ++i) {
    if (!any || r.interior[i]) f(i);
  }
}

}  // namespace

double TensionReport::max_relative() const {
  double m = 0.0;
  for_summary(*this, [&](std::size_t i) { m = std::max(m, relative(i)); });
  return m;
}

double TensionReport::mean_relative() const {
  double sum = 0.0;
  std::size_t count = 0;
  for_summary(*this, [&](std::size_t i) {
    sum += relative(i);
    ++count;
  });
  return count ? sum / static_cast<double>(count) : 0.0;
}

double TensionReport::max_abs() const {
  double m = 0.0;
  for_summary(*this, [&](std::size_t i) { m = std::max(m, residual_norm[i]); });
  return m;
}

TensionReport tension_r(const CurveSamples& curve, int r, const DifferentiationOptions& options) {
  if (r < 1 || r > 3) throw Error(ErrorCode::kInvalidArgument, "tension_r: r must be 1, 2 or 3");
  const CovariantJet jet = covariant_derivatives(curve, 2 * r - 1, options);
  const std::size_t n = curve.size();
  TensionReport rep;
  rep.order = r;
  rep.method = TensionMethod::kFiniteDifference;
  rep.s = curve.s;
  rep.res_t.resize(n);
  rep.res_n.resize(n);
  rep.res_b.resize(n);
  rep.residual_norm.resize(n);
  rep.term_scale.resize(n);
  rep.frame_defined.resize(n);
  rep.interior = jet.interior.back();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3& p = curve.points[i];
    const Vec3& t = jet.d[0][i];
    Vec3 res;
    double scale = 0.0;
    if (r == 1) {
      res = jet.d[1][i];
      scale = res.norm();
    } else if (r == 2) {
      const Vec3 a = jet.d[3][i];
      const Vec3 b = riemann_apply(curve.manifold, p, jet.d[1][i], t, t);
      res = a + b;
      scale = std::max(a.norm(), b.norm());
    } else {
      const Vec3 a = jet.d[5][i];
      const Vec3 b = riemann_apply(curve.manifold, p, jet.d[3][i], t, t);
      const Vec3 c = riemann_apply(curve.manifold, p, jet.d[2][i], jet.d[1][i], t);
      res = a + b - c;
      scale = std::max({a.norm(), b.norm(), c.norm()});
    }
    const double kappa = jet.d[1][i].norm();
    Vec3 tt = t.normalized();
    Vec3 nn = Vec3::UnitY();
    Vec3 bb = Vec3::UnitZ();
    if (kappa > kKappaTol) {
      nn = jet.d[1][i] / kappa;
      bb = tt.cross(nn);
      rep.frame_defined[i] = true;
      rep.res_t[i] = res.dot(tt);
      rep.res_n[i] = res.dot(nn);
      rep.res_b[i] = res.dot(bb);
    } else {
      rep.frame_defined[i] = false;
      rep.res_t[i] = res[0];
      rep.res_n[i] = res[1];
      rep.res_b[i] = res[2];
    }
    rep.residual_norm[i] = res.norm();
    rep.term_scale[i] = scale;
  }
  return rep;
}

Mat3 frenet_frame_with_vertical(const Vec3& vertical) {
  const double len = vertical.norm();
  if (std::abs(len - 1.0) > 1e-8) {
    throw Error(ErrorCode::kInvalidArgument, "vertical projections (T3, N3, B3) must be a unit vector");
  }
  const Vec3 u = vertical / len;
  Vec3 e = Vec3::Zero();
  Eigen::Index k;
  u.cwiseAbs().minCoeff(&k);
  e[k] = 1.0;
  const Vec3 c0 = (e - e.dot(u) * u).normalized();
  const Vec3 c1 = u.cross(c0);
  Mat3 q;
  q.col(0) = c0;
  q.col(1) = c1;
  q.col(2) = u;
  return q;
}

std::array<Vec3, 6> helix_covariant_derivatives(double k, double t) {
  const double w = k * k + t * t;
  return {Vec3(1.0, 0.0, 0.0),
          Vec3(0.0, k, 0.0),
          Vec3(-k * k, 0.0, k * t),
          Vec3(0.0, -k * w, 0.0),
          Vec3(k * k * w, 0.0, -k * t * w),
          Vec3(0.0, k * w * w, 0.0)};
}

HelixResidual helix_tension_exact(const ManifoldModel& m, double kappa0, double tau0,
                                  const Vec3& vertical) {
  if (!(kappa0 > 0.0)) {
    throw Error(ErrorCode::kNotAHelix, "helix_tension_exact: kappa0 must be > 0");
  }
  if (m.is_surface()) {
    throw Error(ErrorCode::kUnsupported, "helix_tension_exact: needs a 3-dimensional model");
  }
  Mat3 frame = Mat3::Identity();
  if (m.as<Bcv>() != nullptr) frame = frenet_frame_with_vertical(vertical);
  const Vec3 t = frame.row(0).transpose();
  const Vec3 n = frame.row(1).transpose();
  const Vec3 b = frame.row(2).transpose();
  const Vec3 origin = Vec3::Zero();
  const Vec3 rntt = riemann_apply(m, origin, n, t, t);
  const Vec3 rbnt = riemann_apply(m, origin, b, n, t);
  const double k2 = kappa0 * kappa0;
  const double t2 = tau0 * tau0;
  HelixResidual h;
  h.normal = (k2 + t2) * (k2 + t2) - (2.0 * k2 + t2) * rntt.dot(n) - kappa0 * tau0 * rbnt.dot(n);
  h.binormal = (2.0 * k2 + t2) * rntt.dot(b) + kappa0 * tau0 * rbnt.dot(b);
  h.tangent = 0.0;
  return h;
}

}  // namespace trikurve
