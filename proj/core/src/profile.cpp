#include "trikurve/profile.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <variant>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/interpolators/quintic_hermite.hpp>

#include "trikurve/error.hpp"
#include "trikurve/surface_ode.hpp"

namespace trikurve {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

struct ConstantData {
  double kappa0;
  double tau0;
};

struct ClosedFormData {};

struct OrbitData {
  double c1;
  double c2;
  Interval domain;
  boost::math::interpolators::cardinal_quintic_hermite<std::vector<double>> kappa;
};

struct TableData {
  std::vector<double> s;
  std::vector<double> kappa;
  std::vector<double> tau;
  boost::math::interpolators::cardinal_cubic_b_spline<double> kappa_spline;
  boost::math::interpolators::cardinal_cubic_b_spline<double> tau_spline;
};

// tau and tau' from a curvature jet including the fifth derivative.
std::array<double, 2> torsion_with_derivative(const std::array<double, 6>& k) {
  const double num = k[4] - 15.0 * k[0] * k[1] * k[1] - 10.0 * k[0] * k[0] * k[2] +
                     std::pow(k[0], 5);
  const double den = k[2] - 2.0 * k[0] * k[0] * k[0];
  const double dnum = k[5] - 15.0 * k[1] * k[1] * k[1] - 50.0 * k[0] * k[1] * k[2] -
                      10.0 * k[0] * k[0] * k[3] + 5.0 * std::pow(k[0], 4) * k[1];
  const double dden = k[3] - 6.0 * k[0] * k[0] * k[1];
  const double t2 = num / den;
  if (!(t2 >= 0.0)) {
    std::ostringstream os;
    os << "tau^2 = " << t2 << " < 0 along the profile";
    throw Error(ErrorCode::kNegativeTorsionSquare, os.str());
  }
  const double t = std::sqrt(t2);
  const double dt2 = (dnum * den - num * dden) / (den * den);
  return {t, t > 0.0 ? dt2 / (2.0 * t) : 0.0};
}

void check_domain(const Interval& d, double s) {
  const double slack = 1e-12 * std::max(1.0, std::abs(d.hi - d.lo));
  if (!d.contains(s, slack) || (d.lo == 0.0 && !std::isfinite(d.hi) && !(s > 0.0))) {
    std::ostringstream os;
    os << "s = " << s << " outside profile domain [" << d.lo << ", " << d.hi << "]";
    throw Error(ErrorCode::kOutOfChart, os.str());
  }
}

}  // namespace

struct FrenetProfile::Impl {
  Kind kind;
  std::variant<ConstantData, ClosedFormData, OrbitData, TableData> data;
};

FrenetProfile::FrenetProfile(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

FrenetProfile FrenetProfile::constant_pair(double kappa0, double tau0) {
  if (!std::isfinite(kappa0) || !std::isfinite(tau0)) {
    throw Error(ErrorCode::kInvalidArgument, "constant_pair: non-finite curvature or torsion");
  }
  return FrenetProfile(std::make_shared<const Impl>(
      Impl{Kind::kConstantPair, ConstantData{kappa0, tau0}}));
}

FrenetProfile FrenetProfile::theorem_existence() {
  return FrenetProfile(
      std::make_shared<const Impl>(Impl{Kind::kTheoremExistence, ClosedFormData{}}));
}

FrenetProfile FrenetProfile::theorem_existence(double c1, double c2, double s0,
                                               double kappa0, double s1, int slope_sign) {
  if (!(s1 > s0)) {
    throw Error(ErrorCode::kInvalidArgument, "theorem_existence: need s1 > s0");
  }
  FirstIntegralParams p;
  p.c1 = c1;
  p.c2 = c2;
  FirstIntegralOptions opt;
  opt.slope_sign = slope_sign;
  opt.step = (s1 - s0) / 4000.0;
  FirstIntegralSolution sol = solve_first_integral(p, kappa0, Interval{s0, s1}, opt);
  const double h = sol.s.size() > 1 ? sol.s[1] - sol.s[0] : opt.step;
  OrbitData orbit{c1, c2, Interval{s0, s1},
                  {std::move(sol.kappa), std::move(sol.kappa_prime),
                   std::move(sol.kappa_second), s0, h}};
  return FrenetProfile(
      std::make_shared<const Impl>(Impl{Kind::kTheoremExistence, std::move(orbit)}));
}

FrenetProfile FrenetProfile::tabulated(std::vector<double> s, std::vector<double> kappa,
                                       std::vector<double> tau) {
  if (s.size() < 4 || kappa.size() != s.size() || tau.size() != s.size()) {
    throw Error(ErrorCode::kTooFewSamples,
                "tabulated profile needs at least 4 samples of equal length columns");
  }
  const double h = (s.back() - s.front()) / static_cast<double>(s.size() - 1);
  if (!(h > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "tabulated profile: s must increase");
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double expected = s.front() + h * static_cast<double>(i);
    if (std::abs(s[i] - expected) > 1e-6 * h) {
      std::ostringstream os;
      os << "tabulated profile grid is not uniform at row " << i;
      throw Error(ErrorCode::kNonUniform, os.str());
    }
  }
  TableData t{std::move(s), std::move(kappa), std::move(tau), {}, {}};
  t.kappa_spline = boost::math::interpolators::cardinal_cubic_b_spline<double>(
      t.kappa.data(), t.kappa.size(), t.s.front(), h);
  t.tau_spline = boost::math::interpolators::cardinal_cubic_b_spline<double>(
      t.tau.data(), t.tau.size(), t.s.front(), h);
  return FrenetProfile(std::make_shared<const Impl>(Impl{Kind::kTabulated, std::move(t)}));
}

FrenetProfile::Kind FrenetProfile::kind() const { return impl_->kind; }

Interval FrenetProfile::domain() const {
  struct {
    Interval operator()(const ConstantData&) const { return {-kInf, kInf}; }
    Interval operator()(const ClosedFormData&) const { return {0.0, kInf}; }
    Interval operator()(const OrbitData& o) const { return o.domain; }
    Interval operator()(const TableData& t) const { return {t.s.front(), t.s.back()}; }
  } visitor;
  return std::visit(visitor, impl_->data);
}

ProfileJet FrenetProfile::jet(double s) const {
  check_domain(domain(), s);
  ProfileJet j;
  if (const auto* c = std::get_if<ConstantData>(&impl_->data)) {
    j.kappa = {c->kappa0, 0.0, 0.0, 0.0, 0.0};
    j.tau = {c->tau0, 0.0};
  } else if (std::holds_alternative<ClosedFormData>(impl_->data)) {
    const double r5 = std::sqrt(5.0);
    double fact = 1.0;
    double sign = 1.0;
    for (int n = 0; n < 5; ++n) {
      if (n > 0) fact *= n;
      j.kappa[n] = sign * r5 * fact / std::pow(s, n + 1);
      sign = -sign;
    }
    const double t = 1.5 * std::sqrt(7.0);
    j.tau = {t / s, -t / (s * s)};
  } else if (const auto* o = std::get_if<OrbitData>(&impl_->data)) {
    const double k = o->kappa(s);
    const double kp = o->kappa.prime(s);
    const auto full = first_integral_jet(o->c1, k, kp);
    for (int n = 0; n < 5; ++n) j.kappa[n] = full[n];
    j.tau = torsion_with_derivative(full);
  } else {
    const auto& t = std::get<TableData>(impl_->data);
    j.kappa = {t.kappa_spline(s), t.kappa_spline.prime(s), t.kappa_spline.double_prime(s),
               kNaN, kNaN};
    j.tau = {t.tau_spline(s), t.tau_spline.prime(s)};
  }
  return j;
}

double FrenetProfile::kappa(double s) const {
  if (const auto* t = std::get_if<TableData>(&impl_->data)) {
    check_domain(domain(), s);
    return t->kappa_spline(s);
  }
  if (const auto* o = std::get_if<OrbitData>(&impl_->data)) {
    check_domain(domain(), s);
    return o->kappa(s);
  }
  return jet(s).kappa[0];
}

double FrenetProfile::tau(double s) const {
  if (const auto* t = std::get_if<TableData>(&impl_->data)) {
    check_domain(domain(), s);
    return t->tau_spline(s);
  }
  return jet(s).tau[0];
}

double FrenetProfile::kappa0() const {
  if (const auto* c = std::get_if<ConstantData>(&impl_->data)) return c->kappa0;
  return 0.0;
}

double FrenetProfile::tau0() const {
  if (const auto* c = std::get_if<ConstantData>(&impl_->data)) return c->tau0;
  return 0.0;
}

double FrenetProfile::c1() const {
  if (const auto* o = std::get_if<OrbitData>(&impl_->data)) return o->c1;
  return 0.0;
}

double FrenetProfile::c2() const {
  if (const auto* o = std::get_if<OrbitData>(&impl_->data)) return o->c2;
  return 0.0;
}

namespace {
const std::vector<double> kEmpty;
}

const std::vector<double>& FrenetProfile::table_s() const {
  if (const auto* t = std::get_if<TableData>(&impl_->data)) return t->s;
  return kEmpty;
}

const std::vector<double>& FrenetProfile::table_kappa() const {
  if (const auto* t = std::get_if<TableData>(&impl_->data)) return t->kappa;
  return kEmpty;
}

const std::vector<double>& FrenetProfile::table_tau() const {
  if (const auto* t = std::get_if<TableData>(&impl_->data)) return t->tau;
  return kEmpty;
}

}  // namespace trikurve
