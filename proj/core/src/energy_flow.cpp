#include "trikurve/energy_flow.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/float128.hpp>
#include <unsupported/Eigen/AutoDiff>

#include "trikurve/error.hpp"
#include "trikurve/frenet.hpp"

namespace trikurve {
namespace {

// Chart families the flow can differentiate through: BCV(a, b) (which also
// covers SpaceForm2 as the z = 0 slice of BCV(rho/4, 0) and its product with
// a line) and the conformal chart of SpaceForm3.
template <class R>
struct LocalModel {
  bool bcv = true;
  bool surface = false;
  R a = 0;
  R b = 0;
  R c = 0;
};

LocalModel<double> local_model(const ManifoldModel& m) {
  LocalModel<double> lm;
  if (const auto* s2 = m.as<SpaceForm2>()) {
    lm.a = s2->rho / 4.0;
    lm.surface = true;
  } else if (const auto* s3 = m.as<SpaceForm3>()) {
    lm.bcv = false;
    lm.c = s3->rho / 4.0;
  } else if (const auto* bcv = m.as<Bcv>()) {
    lm.a = bcv->a;
    lm.b = bcv->b;
  } else if (const auto* prod = m.as<ProductWithLine>()) {
    const auto* base = prod->base->as<SpaceForm2>();
    if (base == nullptr) {
      throw Error(ErrorCode::kUnsupported, "the flow supports products of SpaceForm2 only");
    }
    lm.a = base->rho / 4.0;
  } else {
    throw Error(ErrorCode::kUnsupported, "the flow does not support ruled-surface models");
  }
  return lm;
}

template <class S>
using V3 = Eigen::Matrix<S, 3, 1>;

template <class S, class R>
V3<S> frame_components(const LocalModel<R>& m, const V3<S>& p, const V3<S>& v) {
  if (m.bcv) {
    const S lam = R(1) + m.a * (p[0] * p[0] + p[1] * p[1]);
    const S f1 = v[0] / lam;
    const S f2 = v[1] / lam;
    return V3<S>(f1, f2, v[2] + (m.b / R(2)) * (p[1] * f1 - p[0] * f2));
  }
  const S lam = R(1) + m.c * (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
  return V3<S>(v[0] / lam, v[1] / lam, v[2] / lam);
}

// sum_{i,j} X_i Y_j Gamma^k_{ij}
template <class S, class R>
V3<S> connection_term(const LocalModel<R>& m, const V3<S>& p, const V3<S>& x, const V3<S>& y) {
  if (m.bcv) {
    const S ay2 = (R(2) * m.a) * p[1];
    const S ax2 = (R(2) * m.a) * p[0];
    const R hb = m.b / R(2);
    return V3<S>(-x[0] * y[1] * ay2 + x[1] * y[1] * ax2 + (x[1] * y[2] + x[2] * y[1]) * hb,
                 x[0] * y[0] * ay2 - x[1] * y[0] * ax2 - (x[0] * y[2] + x[2] * y[0]) * hb,
                 (x[0] * y[1] - x[1] * y[0]) * hb);
  }
  const V3<S> grad = p * (R(2) * m.c);
  return V3<S>(grad * x.dot(y) - x * y.dot(grad));
}

// (1/2)|Z|^2 h at the centre of a 7-vertex window.
template <class S, class R>
S local_energy(const LocalModel<R>& m, const V3<S>* x, R h) {
  const R inv = R(1) / (R(2) * h);
  V3<S> v[7];
  for (int j = 1; j <= 5; ++j) {
    v[j] = frame_components<S, R>(m, x[j], V3<S>((x[j + 1] - x[j - 1]) * inv));
  }
  V3<S> w[7];
  for (int j = 2; j <= 4; ++j) {
    w[j] = V3<S>((v[j + 1] - v[j - 1]) * inv) + connection_term<S, R>(m, x[j], v[j], v[j]);
  }
  const V3<S> z = V3<S>((w[4] - w[2]) * inv) + connection_term<S, R>(m, x[3], v[3], w[3]);
  return z.squaredNorm() * (h / R(2));
}

template <class S, class R>
S segment_length(const LocalModel<R>& m, const V3<S>& p, const V3<S>& q) {
  using std::sqrt;
  const V3<S> mid = (p + q) / R(2);
  return sqrt(frame_components<S, R>(m, mid, V3<S>(q - p)).squaredNorm());
}

std::size_t wrap(long i, std::size_t n) {
  const long nn = static_cast<long>(n);
  return static_cast<std::size_t>(((i % nn) + nn) % nn);
}

template <class R>
std::vector<R> segment_lengths(const LocalModel<R>& m, const std::vector<V3<R>>& pts, bool closed) {
  const std::size_t n = pts.size();
  const std::size_t segs = closed ? n : n - 1;
  std::vector<R> l(segs);
  for (std::size_t j = 0; j < segs; ++j) l[j] = segment_length<R, R>(m, pts[j], pts[(j + 1) % n]);
  return l;
}

std::vector<double> segment_lengths(const LocalModel<double>& m, const FlowState& st) {
  return segment_lengths<double>(m, st.points, st.closed);
}

void check_state(const LocalModel<double>& m, const FlowState& st) {
  if (st.points.size() < 9) {
    throw Error(ErrorCode::kTooFewVertices, "the discrete trienergy needs at least 9 vertices");
  }
  if (!(st.h > 0.0)) throw Error(ErrorCode::kInvalidArgument, "flow state needs h > 0");
  const auto l = segment_lengths(m, st);
  const auto [lo, hi] = std::minmax_element(l.begin(), l.end());
  if (!(*lo > 0.0) || *hi / *lo > 1.5) {
    std::ostringstream os;
    os << "segment length ratio " << (*hi / *lo) << " exceeds 1.5";
    throw Error(ErrorCode::kNonUniform, os.str());
  }
}

template <class F>
void for_each_centre(std::size_t n, bool closed, F&& f) {
  if (closed) {
    for (std::size_t i = 0; i < n; ++i) f(static_cast<long>(i));
  } else {
    for (std::size_t i = 3; i + 3 < n; ++i) f(static_cast<long>(i));
  }
}

template <class R, int Dim, int K>
void seed(const V3<R>* p, V3<Eigen::AutoDiffScalar<Eigen::Matrix<R, K * Dim, 1>>>* x) {
  using Ad = Eigen::AutoDiffScalar<Eigen::Matrix<R, K * Dim, 1>>;
  for (int k = 0; k < K; ++k) {
    for (int c = 0; c < 3; ++c) {
      if (c < Dim) {
        x[k][c] = Ad(p[k][c], K * Dim, k * Dim + c);
      } else {
        x[k][c] = Ad(p[k][c]);
        x[k][c].derivatives().setZero();
      }
    }
  }
}

// Euclidean chart gradient of trienergy + penalty (before end clamping).
template <class R, int Dim>
std::vector<V3<R>> raw_gradient(const LocalModel<R>& m, const std::vector<V3<R>>& pts,
                                bool closed, R h, R weight) {
  const std::size_t n = pts.size();
  std::vector<V3<R>> g(n, V3<R>::Zero());
  {
    using Ad = Eigen::AutoDiffScalar<Eigen::Matrix<R, 7 * Dim, 1>>;
    for_each_centre(n, closed, [&](long i) {
      V3<R> p[7];
      std::size_t idx[7];
      for (int k = 0; k < 7; ++k) {
        idx[k] = wrap(i - 3 + k, n);
        p[k] = pts[idx[k]];
      }
      V3<Ad> x[7];
      seed<R, Dim, 7>(p, x);
      const Ad e = local_energy<Ad, R>(m, x, h);
      for (int k = 0; k < 7; ++k) {
        for (int c = 0; c < Dim; ++c) g[idx[k]][c] += e.derivatives()[k * Dim + c];
      }
    });
  }
  using Ad = Eigen::AutoDiffScalar<Eigen::Matrix<R, 2 * Dim, 1>>;
  const auto l = segment_lengths<R>(m, pts, closed);
  R mean = 0;
  for (const R& v : l) mean += v;
  mean /= R(l.size());
  // The mean's own derivative drops out because sum (l_j - mean) = 0.
  for (std::size_t j = 0; j < l.size(); ++j) {
    const std::size_t ids[2] = {j, (j + 1) % n};
    const V3<R> p[2] = {pts[ids[0]], pts[ids[1]]};
    V3<Ad> x[2];
    seed<R, Dim, 2>(p, x);
    const Ad len = segment_length<Ad, R>(m, x[0], x[1]);
    const R coef = R(2) * weight * (l[j] - mean);
    for (int k = 0; k < 2; ++k) {
      for (int c = 0; c < Dim; ++c) g[ids[k]][c] += coef * len.derivatives()[k * Dim + c];
    }
  }
  return g;
}

void clamp_gradient(const FlowState& st, std::vector<Vec3>& g) {
  if (st.closed) return;
  const std::size_t n = g.size();
  for (std::size_t i : {std::size_t{0}, std::size_t{1}, n - 2, n - 1}) g[i].setZero();
}

EnergyParts energy_unchecked(const LocalModel<double>& m, const FlowState& st) {
  EnergyParts e;
  const std::size_t n = st.points.size();
  for_each_centre(n, st.closed, [&](long i) {
    Vec3 x[7];
    for (int k = 0; k < 7; ++k) x[k] = st.points[wrap(i - 3 + k, n)];
    e.trienergy += local_energy<double, double>(m, x, st.h);
  });
  const auto l = segment_lengths(m, st);
  double mean = 0.0;
  for (double v : l) mean += v;
  mean /= static_cast<double>(l.size());
  for (double v : l) e.penalty += (v - mean) * (v - mean);
  e.penalty *= st.penalty_weight;
  return e;
}

}  // namespace

FlowState make_flow_state(std::vector<Vec3> points, const ManifoldModel& m, bool closed,
                          double penalty_weight) {
  FlowState st;
  st.points = std::move(points);
  st.manifold = m;
  st.closed = closed;
  const LocalModel<double> lm = local_model(m);
  if (st.points.size() < 9) {
    throw Error(ErrorCode::kTooFewVertices, "the discrete trienergy needs at least 9 vertices");
  }
  if (lm.surface) {
    for (auto& p : st.points) p[2] = 0.0;
  }
  const auto l = segment_lengths(lm, st);
  double total = 0.0;
  for (double v : l) total += v;
  st.h = total / static_cast<double>(l.size());
  if (penalty_weight > 0.0) {
    st.penalty_weight = penalty_weight;
  } else {
    st.penalty_weight = 0.0;
    const EnergyParts e = discrete_trienergy(st);
    st.penalty_weight = std::max(10.0 * e.trienergy / total, 1e-12);
  }
  const EnergyParts e = discrete_trienergy(st);
  st.energy = e.trienergy;
  st.penalty = e.penalty;
  return st;
}

FlowState circle_flow_state(double rho, double kappa_g, std::size_t n, double penalty_weight) {
  const double length = spaceform2_circle_length(rho, kappa_g);
  CurveSamples c = spaceform2_circle(rho, kappa_g, n, length / static_cast<double>(n));
  return make_flow_state(std::move(c.points), ManifoldModel::space_form2(rho), true,
                         penalty_weight);
}

EnergyParts discrete_trienergy(const FlowState& state) {
  const LocalModel<double> m = local_model(state.manifold);
  check_state(m, state);
  return energy_unchecked(m, state);
}

std::vector<Vec3> trienergy_gradient(const FlowState& state) {
  const LocalModel<double> m = local_model(state.manifold);
  check_state(m, state);
  std::vector<Vec3> g =
      m.surface ? raw_gradient<double, 2>(m, state.points, state.closed, state.h, state.penalty_weight)
                : raw_gradient<double, 3>(m, state.points, state.closed, state.h, state.penalty_weight);
  clamp_gradient(state, g);
  return g;
}

std::vector<Vec3> trienergy_gradient_fd(const FlowState& state, double rel_step, bool central) {
  const LocalModel<double> m = local_model(state.manifold);
  check_state(m, state);
  const int dim = m.surface ? 2 : 3;
  std::vector<Vec3> g(state.points.size(), Vec3::Zero());
  const double e0 = energy_unchecked(m, state).total();
  FlowState work = state;
  for (std::size_t i = 0; i < state.points.size(); ++i) {
    for (int c = 0; c < dim; ++c) {
      const double x = state.points[i][c];
      const double d = rel_step * std::max(1.0, std::abs(x));
      work.points[i][c] = x + d;
      const double ep = energy_unchecked(m, work).total();
      if (central) {
        work.points[i][c] = x - d;
        const double em = energy_unchecked(m, work).total();
        g[i][c] = (ep - em) / (2.0 * d);
      } else {
        g[i][c] = (ep - e0) / d;
      }
      work.points[i][c] = x;
    }
  }
  clamp_gradient(state, g);
  return g;
}

double gradient_norm(const FlowState& state, const std::vector<Vec3>& gradient) {
  double m = 0.0;
  for (std::size_t i = 0; i < gradient.size(); ++i) {
    const Mat3 f = frame_at(state.manifold, state.points[i]).frame;
    m = std::max(m, (f.transpose() * gradient[i]).norm());
  }
  return m / state.h;
}

FlowState respace(const FlowState& state) {
  const LocalModel<double> m = local_model(state.manifold);
  const std::size_t n = state.points.size();
  FlowState out = state;
  // Vertices first..last are redistributed along the polyline between them.
  const std::size_t first = state.closed ? 0 : 1;
  const std::size_t last = state.closed ? n : n - 2;
  std::vector<double> cum{0.0};
  for (std::size_t j = first; j < last; ++j) {
    cum.push_back(cum.back() +
                  segment_length<double, double>(m, state.points[j], state.points[(j + 1) % n]));
  }
  const std::size_t count = last - first;
  const double total = cum.back();
  std::size_t seg = 0;
  for (std::size_t k = 1; k < count; ++k) {
    const double target = total * static_cast<double>(k) / static_cast<double>(count);
    while (seg + 1 < cum.size() - 1 && cum[seg + 1] < target) ++seg;
    const double t = (target - cum[seg]) / (cum[seg + 1] - cum[seg]);
    const Vec3& p = state.points[first + seg];
    const Vec3& q = state.points[(first + seg + 1) % n];
    out.points[first + k] = p + t * (q - p);
  }
  const EnergyParts e = energy_unchecked(m, out);
  out.energy = e.trienergy;
  out.penalty = e.penalty;
  return out;
}

FlowResult run_flow(FlowState state, const FlowOptions& options, const FlowCallback& on_iteration) {
  const LocalModel<double> m = local_model(state.manifold);
  check_state(m, state);
  FlowResult result;
  EnergyParts e = energy_unchecked(m, state);
  state.energy = e.trienergy;
  state.penalty = e.penalty;
  double step = options.initial_step;
  std::vector<Vec3> g = trienergy_gradient(state);
  double gn = gradient_norm(state, g);
  state.gradient = g;
  result.log.push_back({state.iteration, e.total(), gn, 0.0});
  FlowState trial = state;
  for (int it = 1; it <= options.max_iters; ++it) {
    if (gn < options.grad_tol) {
      result.converged = true;
      break;
    }
    std::vector<Vec3> dir(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      const Mat3 f = frame_at(state.manifold, state.points[i]).frame;
      dir[i] = f * (f.transpose() * g[i]);
      if (m.surface) dir[i][2] = 0.0;
    }
    bool accepted = false;
    EnergyParts et;
    step *= 2.0;
    while (step >= options.min_step) {
      for (std::size_t i = 0; i < g.size(); ++i) trial.points[i] = state.points[i] - step * dir[i];
      try {
        check_state(m, trial);
        bool inside = true;
        for (const auto& p : trial.points) inside = inside && in_chart(state.manifold, p);
        if (inside) {
          et = energy_unchecked(m, trial);
          if (et.total() < e.total()) {
            accepted = true;
            break;
          }
        }
      } catch (const Error&) {
      }
      step *= 0.5;
    }
    if (!accepted) {
      result.line_search_failed = true;
      break;
    }
    state.points = trial.points;
    state.energy = et.trienergy;
    state.penalty = et.penalty;
    state.iteration = it;
    state.step = step;
    e = et;
    if (options.respace_every > 0 && it % options.respace_every == 0) {
      FlowState r = respace(state);
      const EnergyParts er = energy_unchecked(m, r);
      if (er.total() <= e.total()) {
        state.points = r.points;
        state.energy = er.trienergy;
        state.penalty = er.penalty;
        e = er;
      } else {
        ++result.respace_rejected;
      }
    }
    g = trienergy_gradient(state);
    gn = gradient_norm(state, g);
    state.gradient = g;
    result.log.push_back({it, e.total(), gn, step});
    if (on_iteration) on_iteration(state);
  }
  if (!result.converged && gn < options.grad_tol) result.converged = true;
  result.final_state = std::move(state);
  return result;
}

CircleGradientProbe circle_gradient_probe(double rho, double kappa_sq, double target_h,
                                          double tilt) {
  using R = boost::multiprecision::float128;
  using std::cos;
  using std::sin;
  if (!(rho > 0.0) || !(kappa_sq >= 0.0) || !(target_h > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "circle probe needs rho > 0, kappa^2 >= 0, h > 0");
  }
  const R sr = sqrt(R(rho));
  const R kappa = sqrt(R(kappa_sq));
  // Angular radius on the unit sphere: kappa_g = sqrt(rho) cot(theta).
  const R theta = atan2(sr, kappa);
  const R psi = R(tilt);
  if (!(double(theta + abs(psi)) < boost::math::constants::pi<double>() - 1e-3)) {
    throw Error(ErrorCode::kInvalidArgument, "circle passes through the chart's point at infinity");
  }
  const R two_pi = R(2) * boost::math::constants::pi<R>();
  const R length = two_pi * sin(theta) / sr;
  const auto n = static_cast<std::size_t>(std::max(9.0, std::round(double(length) / target_h)));
  const V3<R> u(sin(psi), R(0), -cos(psi));
  const V3<R> e1(cos(psi), R(0), sin(psi));
  const V3<R> e2(R(0), R(1), R(0));
  std::vector<V3<R>> pts(n);
  for (std::size_t i = 0; i < n; ++i) {
    const R phi = two_pi * R(i) / R(n);
    const V3<R> p = u * cos(theta) + (e1 * cos(phi) + e2 * sin(phi)) * sin(theta);
    // Stereographic projection from (0, 0, 1), scaled to the chart of S^2(rho).
    const R k = R(2) / (sr * (R(1) - p[2]));
    pts[i] = V3<R>(p[0] * k, p[1] * k, R(0));
  }
  LocalModel<R> m;
  m.a = R(rho) / R(4);
  m.surface = true;
  const auto l = segment_lengths<R>(m, pts, true);
  R h = 0;
  for (const R& v : l) h += v;
  h /= R(n);
  const auto g = raw_gradient<R, 2>(m, pts, true, h, R(0));
  R energy = 0;
  for_each_centre(n, true, [&](long i) {
    V3<R> x[7];
    for (int k = 0; k < 7; ++k) x[k] = pts[wrap(i - 3 + k, n)];
    energy += local_energy<R, R>(m, x, h);
  });
  R gmax = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const R lam = R(1) + m.a * (pts[i][0] * pts[i][0] + pts[i][1] * pts[i][1]);
    gmax = std::max(gmax, R(sqrt(g[i].squaredNorm()) * lam));
  }
  CircleGradientProbe out;
  out.vertices = n;
  out.h = double(h);
  out.energy = double(energy);
  out.gradient_norm = double(gmax / h);
  return out;
}

double closed_curve_kappa(const FlowState& state) {
  if (!state.closed) {
    throw Error(ErrorCode::kInvalidArgument, "closed_curve_kappa needs a closed curve");
  }
  const LocalModel<double> m = local_model(state.manifold);
  const FlowState r = respace(state);
  const auto l = segment_lengths(m, r);
  double total = 0.0;
  for (double v : l) total += v;
  const std::size_t n = r.points.size();
  const double hs = total / static_cast<double>(n);
  CurveSamples c;
  c.manifold = state.manifold;
  for (std::size_t k = 0; k < 3 * n; ++k) {
    c.s.push_back(hs * static_cast<double>(k));
    c.points.push_back(r.points[k % n]);
  }
  DifferentiationOptions opt;
  opt.accuracy = 4;
  opt.stride = 1;
  const FrenetApparatus f = measure_frenet(c, opt);
  double sum = 0.0;
  for (std::size_t k = n; k < 2 * n; ++k) sum += f.kappa[k];
  return sum / static_cast<double>(n);
}

}  // namespace trikurve
