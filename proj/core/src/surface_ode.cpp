#include "trikurve/surface_ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "trikurve/error.hpp"

namespace trikurve {
namespace {

namespace odeint = boost::numeric::odeint;
using State2 = std::array<double, 2>;

double max_abs(std::initializer_list<double> xs) {
  double m = 0.0;
  for (double x : xs) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

SurfaceResidual surface_residual(const std::array<double, 5>& k, double gauss_k) {
  const double t1a = k[0] * k[3];
  const double t1b = 2.0 * k[1] * k[2];
  const double t1c = 2.0 * k[0] * k[0] * k[0] * k[1];
  const double t2a = k[4];
  const double t2b = 15.0 * k[0] * k[1] * k[1];
  const double t2c = 10.0 * k[0] * k[0] * k[2];
  const double t2d = std::pow(k[0], 5);
  const double t2e = gauss_k * (k[2] - 2.0 * k[0] * k[0] * k[0]);
  SurfaceResidual r;
  r.res1 = t1a + t1b - t1c;
  r.res2 = t2a - t2b - t2c + t2d + t2e;
  r.scale1 = max_abs({t1a, t1b, t1c});
  r.scale2 = max_abs({t2a, t2b, t2c, t2d, t2e});
  return r;
}

std::vector<SurfaceResidual> surface_residuals(std::span<const ProfileJet> jets,
                                               std::span<const double> gauss_k) {
  if (gauss_k.size() != jets.size() && gauss_k.size() != 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "surface_residuals: Gaussian curvature must be scalar or per sample");
  }
  std::vector<SurfaceResidual> out;
  out.reserve(jets.size());
  for (std::size_t i = 0; i < jets.size(); ++i) {
    const double k = gauss_k.size() == 1 ? gauss_k[0] : gauss_k[i];
    out.push_back(surface_residual(jets[i].kappa, k));
  }
  return out;
}

double first_integral_rhs(const FirstIntegralParams& p, double kappa) {
  const double k2 = kappa * kappa;
  return (p.c2 - 2.0 * p.c1 / kappa + k2 * k2 + (5.0 / 3.0) * p.tau0 * p.tau0 * k2) / 5.0;
}

double first_integral_second_derivative(const FirstIntegralParams& p, double kappa) {
  return p.c1 / (5.0 * kappa * kappa) + 0.4 * kappa * kappa * kappa +
         p.tau0 * p.tau0 * kappa / 3.0;
}

FirstIntegralSolution solve_first_integral(const FirstIntegralParams& params,
                                           double kappa_init, Interval interval,
                                           const FirstIntegralOptions& options) {
  if (!(kappa_init > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "solve_first_integral: kappa_init must be > 0");
  }
  if (!(interval.hi > interval.lo) || !(options.step > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "solve_first_integral: empty interval or step");
  }
  const double rhs = first_integral_rhs(params, kappa_init);
  const double k2 = kappa_init * kappa_init;
  const double scale = std::max(
      {1.0, std::abs(params.c2), std::abs(2.0 * params.c1 / kappa_init), k2 * k2});
  if (rhs < -1e-13 * scale) {
    std::ostringstream os;
    os << "k'^2 = " << rhs << " < 0 at kappa_init = " << kappa_init;
    throw Error(ErrorCode::kNegativeRadicand, os.str());
  }
  const double kpp0 = first_integral_second_derivative(params, kappa_init);
  if (std::abs(rhs) <= 1e-13 * scale && std::abs(kpp0) <= 1e-12 * std::max(1.0, k2 * kappa_init)) {
    throw Error(ErrorCode::kStalledAtDoubleRoot,
                "k' = k'' = 0 at kappa_init: the solution is the constant curvature");
  }
  const double sign = options.slope_sign < 0 ? -1.0 : 1.0;
  State2 y{kappa_init, sign * std::sqrt(std::max(rhs, 0.0))};

  const auto n = static_cast<std::size_t>(std::ceil(interval.length() / options.step - 1e-9));
  std::vector<double> times(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    times[i] = interval.lo + interval.length() * static_cast<double>(i) / static_cast<double>(n);
  }

  auto system = [&](const State2& x, State2& dxdt, double /*s*/) {
    if (!(x[0] > 0.0) || !std::isfinite(x[0]) || std::abs(x[0]) > 1e100) {
      throw Error(ErrorCode::kBlowUp, "first-integral orbit left k > 0 or escaped");
    }
    dxdt[0] = x[1];
    dxdt[1] = first_integral_second_derivative(params, x[0]);
  };

  FirstIntegralSolution sol;
  sol.s.reserve(n + 1);
  auto observer = [&](const State2& x, double s) {
    if (!(x[0] > 0.0)) {
      throw Error(ErrorCode::kCurvatureVanishes, "curvature reached zero along the orbit");
    }
    sol.s.push_back(s);
    sol.kappa.push_back(x[0]);
    sol.kappa_prime.push_back(x[1]);
    sol.kappa_second.push_back(first_integral_second_derivative(params, x[0]));
  };
  try {
    odeint::integrate_times(
        odeint::make_dense_output(options.abs_tol, options.rel_tol,
                                  odeint::runge_kutta_dopri5<State2>()),
        system, y, times.begin(), times.end(), options.step * 0.1, observer);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::kBlowUp, std::string("first-integral integration failed: ") + e.what());
  }
  return sol;
}

std::array<double, 6> first_integral_jet(double c1, double k, double kp) {
  // k''' = g(k) k' with g = -(2 c1 / 5) k^-3 + (6/5) k^2.
  const double kpp = c1 / (5.0 * k * k) + 0.4 * k * k * k;
  const double g = -0.4 * c1 / (k * k * k) + 1.2 * k * k;
  const double dg = 1.2 * c1 / (k * k * k * k) + 2.4 * k;
  const double ddg = -4.8 * c1 / std::pow(k, 5) + 2.4;
  const double k3 = g * kp;
  const double k4 = dg * kp * kp + g * kpp;
  const double k5 = ddg * kp * kp * kp + 3.0 * dg * kp * kpp + g * k3;
  return {k, kp, kpp, k3, k4, k5};
}

double torsion_from_eq22(const std::array<double, 5>& k) {
  const double num = k[4] - 15.0 * k[0] * k[1] * k[1] - 10.0 * k[0] * k[0] * k[2] +
                     std::pow(k[0], 5);
  const double den = k[2] - 2.0 * k[0] * k[0] * k[0];
  const double scale = std::max({std::abs(k[2]), 2.0 * std::abs(k[0] * k[0] * k[0]), 1e-300});
  if (std::abs(den) <= 1e-14 * scale) {
    throw Error(ErrorCode::kDegenerateDenominator, "k'' - 2 k^3 vanishes");
  }
  const double kscale = std::max(std::abs(k[0]), 1e-300);
  if (std::abs(k[1]) <= 1e-14 * kscale * kscale && std::abs(k[2]) <= 1e-14 * kscale * kscale * kscale) {
    throw Error(ErrorCode::kDegenerateDenominator,
                "constant curvature: handled by the constant-curvature classification");
  }
  const double t2 = num / den;
  if (t2 < 0.0) {
    std::ostringstream os;
    os << "tau^2 = " << t2 << " < 0";
    throw Error(ErrorCode::kNegativeTorsionSquare, os.str());
  }
  return std::sqrt(t2);
}

std::vector<double> torsion_from_eq22(std::span<const ProfileJet> jets) {
  std::vector<double> out;
  out.reserve(jets.size());
  for (const auto& j : jets) out.push_back(torsion_from_eq22(j.kappa));
  return out;
}

double degree10_witness(double k, double c1, double c2, double gk) {
  return 51.0 * std::pow(k, 10) + 75.0 * std::pow(k, 9) + 40.0 * gk * std::pow(k, 8) +
         63.0 * c2 * std::pow(k, 6) - 84.0 * c1 * std::pow(k, 5) -
         5.0 * c1 * gk * k * k * k - 6.0 * c1 * c2 * k + 14.0 * c1 * c1;
}

double degree10_elimination_witness(double k, double c1, double c2, double gk) {
  return 126.0 * std::pow(k, 10) + 40.0 * gk * std::pow(k, 8) +
         63.0 * c2 * std::pow(k, 6) - 84.0 * c1 * std::pow(k, 5) -
         5.0 * c1 * gk * k * k * k - 6.0 * c1 * c2 * k + 14.0 * c1 * c1;
}

double degree5_witness(double k, double tau0, double rho, double c0, double c1, double c2) {
  return 21.0 * std::pow(k, 5) + ((80.0 / 3.0) * tau0 * tau0 - 20.0 * rho) * k * k * k +
         (16.0 * c2 - 20.0 * c0) * k - 32.0 * c1;
}

}  // namespace trikurve
