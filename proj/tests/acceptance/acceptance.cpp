// Acceptance run: one PASS/FAIL line per criterion, with indented detail
// lines underneath. Exits 1 if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "helix_oracles.hpp"
#include "helpers.hpp"
#include "trikurve/classifier.hpp"
#include "trikurve/energy_flow.hpp"
#include "trikurve/error.hpp"
#include "trikurve/frenet.hpp"
#include "trikurve/io.hpp"
#include "trikurve/parametrizer.hpp"
#include "trikurve/surface_ode.hpp"
#include "trikurve/tension.hpp"
#ifdef TRIKURVE_HAVE_CLI
#include "trikurve/cli.hpp"
#endif

using namespace trikurve;

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

struct Outcome {
  bool pass = true;
  std::string summary;
  std::vector<std::string> detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    detail.push_back(std::string(ok ? "ok    " : "FAIL  ") + what);
  }
  void note(const std::string& what) { detail.push_back("info  " + what); }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::array<double, 5> sqrt5_jet(double s) {
  const double c = std::sqrt(5.0);
  return {c / s, -c / (s * s), 2 * c / std::pow(s, 3), -6 * c / std::pow(s, 4),
          24 * c / std::pow(s, 5)};
}

// |eq| / max(1, largest term) for the two BCV helix equations.
double helix_eq_relative(double a, double b, double k, double t, double t3, double n3, double b3) {
  const auto eq = bcv_helix_equations(a, b, k, t, t3, n3, b3);
  const double c = 4 * a - b * b;
  const double r = b * b / 4 + c * b3 * b3;
  const double scale =
      std::max({1.0, (k * k + t * t) * (k * k + t * t), std::abs((2 * k * k + t * t) * r),
                std::abs(k * t * c * t3 * b3)});
  return std::max(std::abs(eq[0]), std::abs(eq[1])) / scale;
}

double helix_exact_relative(const ManifoldModel& m, double k, double t, const Vec3& vert) {
  const auto h = helix_tension_exact(m, k, t, vert);
  const double scale = std::max(1.0, (k * k + t * t) * (k * k + t * t));
  return std::max(std::abs(h.normal), std::abs(h.binormal)) / scale;
}

// ---- 1 ------------------------------------------------------------------

Outcome criterion1() {
  Outcome o;
  const auto t0 = Clock::now();
  double r1 = 0.0, r2 = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double s = 1.0 + i / 1000.0;
    const auto r = surface_residual(sqrt5_jet(s), -63.0 / (4 * s * s));
    r1 = std::max(r1, std::abs(r.res1));
    r2 = std::max(r2, std::abs(r.res2));
  }
  o.require(r1 < 1e-9 && r2 < 1e-9,
            "surface residuals max |eq1| = " + fmt(r1) + ", |eq2| = " + fmt(r2) + " (tol 1e-9)");

  const auto rec = reconstruct_r3(FrenetProfile::theorem_existence(), {1.0, 2.0}, 1e-4);
  const auto f = measure_frenet_spectral(rec.curve);
  double ek = 0.0, et = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double s = f.s[i];
    ek = std::max(ek, std::abs(f.kappa[i] - std::sqrt(5.0) / s));
    et = std::max(et, std::abs(f.tau[i] - 3 * std::sqrt(7.0) / (2 * s)));
  }
  o.require(ek < 1e-6 && et < 1e-6, "re-measured kappa, tau: max error " + fmt(ek) + ", " +
                                        fmt(et) + " over " + std::to_string(f.size()) +
                                        " samples (tol 1e-6)");
  const auto chk = check_ruled_directrix(rec.curve);
  o.note("ruled-surface check of the reconstructed curve: max relative residual " +
         fmt(chk.max_relative()));
  const double dt = seconds_since(t0);
  o.require(dt < 5.0, "runtime " + fmt(dt) + " s (limit 5 s)");
  o.summary = "ruled-surface existence loop";
  return o;
}

// ---- 2 ------------------------------------------------------------------

Outcome criterion2() {
  Outcome o;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double k = th::uniform(1e-3, 10.0);
    const auto sols = classify_surface(k);
    const double k0 = sols.size() == 2 ? sols[1].kappa0 : 0.0;
    worst = std::max(worst, std::abs(k0 * k0 - 2 * k) / (2 * k));
  }
  o.require(worst < 1e-15, "kappa_g^2 = 2 K_S on 100 random K_S: max relative error " +
                               fmt(worst) + " (tol 1e-15)");

  // Regular polygons on tilted circles of S^2(1) with kappa_g^2 = 2.
  const double hs[] = {2e-2, 1e-2, 5e-3};
  std::vector<double> lx, ly;
  std::string row;
  for (double h : hs) {
    const auto p = circle_gradient_probe(1.0, 2.0, h, 0.4);
    lx.push_back(std::log(p.h));
    ly.push_back(std::log(p.gradient_norm));
    row += " h=" + fmt(p.h) + ":" + fmt(p.gradient_norm);
  }
  const double mx = (lx[0] + lx[1] + lx[2]) / 3, my = (ly[0] + ly[1] + ly[2]) / 3;
  double sxx = 0, sxy = 0, syy = 0;
  for (int i = 0; i < 3; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  const double slope = sxy / sxx;
  const double r2 = sxy * sxy / (sxx * syy);
  o.require(std::abs(slope - 2.0) < 0.2 && r2 > 0.99,
            "gradient norm on tilted circles:" + row + "; fitted order " + fmt(slope) +
                ", R^2 " + fmt(r2) + " (need |p - 2| < 0.2, R^2 > 0.99)");
  const auto centred = circle_gradient_probe(1.0, 2.0, 1e-2, 0.0);
  o.note("chart-centred circle, h = 1e-2: gradient norm " + fmt(centred.gradient_norm));
  const auto control = circle_gradient_probe(1.0, 3.0, 5e-3, 0.4);
  o.note("control kappa_g^2 = 3, h = 5e-3: gradient norm " + fmt(control.gradient_norm));
  o.summary = "surface circles kappa_g^2 = 2 K_S";
  return o;
}

// ---- 3 ------------------------------------------------------------------

Outcome criterion3() {
  Outcome o;
  const auto sols = classify_spaceform(1.0, 0.5);
  int proper = 0;
  double k2 = 0.0;
  for (const auto& s : sols) {
    if (s.tag == HelixClass::kSpaceFormHelix && s.admissible) {
      ++proper;
      k2 = s.kappa0 * s.kappa0;
    }
  }
  const double want = 0.75 + std::sqrt(3.0) / 2;
  o.require(proper == 1 && std::abs(k2 - want) < 1e-14 * want,
            std::to_string(proper) + " proper helix, kappa0^2 = " + format_double(k2) +
                " vs 3/4 + sqrt(3)/2 = " + format_double(want));
  const auto ex = helix_tension_exact(ManifoldModel::space_form3(1.0), std::sqrt(k2), 0.5);
  const double res = std::max(std::abs(ex.normal), std::abs(ex.binormal));
  o.require(res < 1e-14, "exact residual " + fmt(res) + " (tol 1e-14)");
  int bad = 0, cells = 0;
  for (int i = 0; i < 100; ++i) {
    for (int j = 0; j < 100; ++j) {
      const double rho = -3.0 + 6.0 * i / 99;
      const double t = -3.0 + 6.0 * (j + 0.5) / 100;
      ++cells;
      if (classify_spaceform(rho, t)[2].admissible) ++bad;
    }
  }
  o.require(bad == 0, "minus branch admissible in " + std::to_string(bad) + " of " +
                          std::to_string(cells) + " grid cells (rho, tau0 != 0)");
  o.summary = "space-form helices";
  return o;
}

// ---- 4 ------------------------------------------------------------------

// Sign scan of 4 * (first helix equation at the printed torsion), which is
// evaluated from the curvature tensor formula, not from P4's coefficients.
std::vector<double> scan_roots(double a, double b, double al) {
  const auto c = p4_coefficients(a, b, al);
  double bound = 0.0;
  for (int i = 0; i < 4; ++i) bound = std::max(bound, std::abs(c[i] / c[4]));
  bound += 1.0;
  const double sa = std::sin(al), ca = std::cos(al);
  auto f = [&](double z) {
    return 4 * bcv_helix_equations(a, b, z * sa, -z * ca - b / 2, ca, 0.0, sa)[0];
  };
  // geometric below bound / n, uniform above
  const int n = 20000;
  std::vector<double> grid;
  for (int i = 60; i > 0; --i) grid.push_back(bound / n * std::pow(0.7, i));
  for (int i = 1; i <= n; ++i) grid.push_back(bound * i / n);
  std::vector<double> out;
  double z0 = 0.0, f0 = f(z0);
  for (double z1 : grid) {
    const double f1 = f(z1);
    if (f1 == 0.0) {
      out.push_back(z1);
    } else if (f0 * f1 < 0) {
      double lo = z0, hi = z1, flo = f0;
      while (hi - lo > 1e-15 * hi) {
        const double m = 0.5 * (lo + hi), fm = f(m);
        if (fm == 0.0) { lo = hi = m; break; }
        if (fm * flo < 0) hi = m;
        else { lo = m; flo = fm; }
      }
      out.push_back(0.5 * (lo + hi));
    }
    z0 = z1;
    f0 = f1;
  }
  return out;
}

Outcome criterion4() {
  Outcome o;
  int count_mismatch = 0, value_mismatch = 0, total_roots = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    const double a = th::uniform(-2, 2), b = th::uniform(-2, 2);
    const double al = th::uniform(0.01, std::numbers::pi - 0.01);
    const auto r = p4_roots(a, b, al);
    const auto oracle = scan_roots(a, b, al);
    std::vector<double> got;
    for (const auto& x : r) {
      for (int m = 0; m < x.multiplicity; ++m) got.push_back(x.value);
    }
    if (got.size() != oracle.size()) {
      ++count_mismatch;
      continue;
    }
    total_roots += static_cast<int>(got.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      const double e = std::abs(got[i] - oracle[i]) / std::max(1.0, oracle[i]);
      worst = std::max(worst, e);
      if (e > 1e-10) ++value_mismatch;
    }
  }
  o.require(count_mismatch == 0,
            "root count differs from the sign-scan oracle in " + std::to_string(count_mismatch) +
                " of 10000 random (a, b, alpha0)");
  o.require(value_mismatch == 0, std::to_string(total_roots) + " roots, max relative difference " +
                                     fmt(worst) + " (tol 1e-10)");

  double worst_b0 = 0.0;
  int wrong_count = 0;
  for (int i = 0; i < 1000; ++i) {
    const double a = th::uniform(1e-3, 3), al = th::uniform(0.05, std::numbers::pi - 0.05);
    const auto r = p4_roots(a, 0.0, al);
    if (r.size() != 1) {
      ++wrong_count;
      continue;
    }
    const double want = std::sqrt(8 * a) * std::sin(al) * std::sin(al);
    worst_b0 = std::max(worst_b0, std::abs(r[0].value - want) / want);
  }
  o.require(wrong_count == 0 && worst_b0 < 1e-10,
            "b = 0, a > 0: single root sqrt(8a) sin^2(alpha0), max relative error " +
                fmt(worst_b0) + " over 1000 draws");
  int nonempty = 0;
  for (int i = 0; i < 1000; ++i) {
    if (!p4_roots(th::uniform(-3, -1e-3), 0.0, th::uniform(0.05, std::numbers::pi - 0.05))
             .empty()) {
      ++nonempty;
    }
  }
  o.require(nonempty == 0, "b = 0, a < 0: " + std::to_string(nonempty) +
                               " of 1000 draws have a positive root");
  o.summary = "P4 roots";
  return o;
}

// ---- 5 ------------------------------------------------------------------

struct HeisenbergCheck {
  double unit_speed = 0.0;
  double kappa_err = 0.0;
  double tau_err = 0.0;  // against the printed torsion
  double tau_err_other = 0.0;  // against zeta cos(alpha0) + b/2
  double fd_tau3 = 0.0;
  double exact = 0.0;
};

HeisenbergCheck check_heisenberg(double b, double al, double zeta) {
  HelixParam p;
  p.type = ParamType::kHeisenberg;
  p.b = b;
  p.alpha0 = al;
  p.zeta = zeta;
  p.interval = {0.0, 8.0};
  p.step = 1e-3;
  const auto hc = parametrize(p);
  HeisenbergCheck c;
  c.unit_speed = hc.unit_speed_error;
  const double k = zeta * std::sin(al);
  const double t = -zeta * std::cos(al) - b / 2;
  const auto f = measure_frenet(hc.curve);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!f.interior[i]) continue;
    c.kappa_err = std::max(c.kappa_err, std::abs(f.kappa[i] - k) / std::max(1.0, k));
    c.tau_err = std::max(c.tau_err, std::abs(f.tau[i] - t) / std::max(1.0, std::abs(t)));
    c.tau_err_other =
        std::max(c.tau_err_other, std::abs(f.tau[i] + t) / std::max(1.0, std::abs(t)));
  }
  c.fd_tau3 = tension_r(hc.curve, 3).max_relative();
  c.exact = helix_exact_relative(ManifoldModel::bcv(0.0, b), k, t,
                                 Vec3(std::cos(al), 0.0, std::sin(al)));
  return c;
}

Outcome criterion5() {
  Outcome o;
  const auto t0 = Clock::now();
  HeisenbergCheck worst;
  int cases = 0, roots = 0;
  std::vector<std::pair<double, double>> draws;
  while (cases < 20) {
    const double b = th::uniform(-2, 2), al = th::uniform(0.1, std::numbers::pi - 0.1);
    if (!(b * std::cos(al) < 0)) continue;
    const auto r = p4_roots(0.0, b, al);
    if (r.empty()) continue;
    ++cases;
    draws.emplace_back(b, al);
    for (const auto& z : r) {
      ++roots;
      const auto c = check_heisenberg(b, al, z.value);
      worst.unit_speed = std::max(worst.unit_speed, c.unit_speed);
      worst.kappa_err = std::max(worst.kappa_err, c.kappa_err);
      worst.tau_err = std::max(worst.tau_err, c.tau_err);
      worst.tau_err_other = std::max(worst.tau_err_other, c.tau_err_other);
      worst.fd_tau3 = std::max(worst.fd_tau3, c.fd_tau3);
      worst.exact = std::max(worst.exact, c.exact);
    }
  }
  const double dt = seconds_since(t0);
  o.note(std::to_string(cases) + " draws with b cos(alpha0) < 0, " + std::to_string(roots) +
         " P4 roots; worst case over all roots");
  o.require(worst.unit_speed < 1e-9, "unit speed error " + fmt(worst.unit_speed) + " (tol 1e-9)");
  o.require(worst.kappa_err < 1e-6, "measured kappa vs zeta sin(alpha0): " +
                                        fmt(worst.kappa_err) + " (tol 1e-6)");
  o.require(worst.tau_err < 1e-6, "measured tau vs -zeta cos(alpha0) - b/2: " +
                                      fmt(worst.tau_err) + " (tol 1e-6)");
  o.note("measured tau vs +zeta cos(alpha0) + b/2: " + fmt(worst.tau_err_other));
  o.require(worst.fd_tau3 < 1e-3,
            "finite-difference tau_3 relative residual " + fmt(worst.fd_tau3) + " (tol 1e-3)");
  o.require(worst.exact < 1e-12, "exact helix residual at (zeta sin(alpha0), "
                                 "-zeta cos(alpha0) - b/2): " + fmt(worst.exact) +
                                     " (tol 1e-12)");
  o.require(dt < 10.0, "runtime " + fmt(dt) + " s (limit 10 s)");

  // Same draws with roots of the helix equation at the measured torsion sign.
  double fd = 0.0, ex = 0.0;
  int good = 0;
  for (const auto& [b, al] : draws) {
    for (double z : th::measured_sign_roots(0.0, b, al)) {
      HelixParam p;
      p.type = ParamType::kHeisenberg;
      p.b = b;
      p.alpha0 = al;
      p.zeta = z;
      p.interval = {0.0, 8.0};
      try {
        fd = std::max(fd, tension_r(parametrize(p).curve, 3).max_relative());
      } catch (const Error&) {
        continue;
      }
      ex = std::max(ex, helix_exact_relative(ManifoldModel::bcv(0.0, b), z * std::sin(al),
                                             z * std::cos(al) + b / 2,
                                             Vec3(std::cos(al), 0.0, std::sin(al))));
      ++good;
    }
  }
  o.note("with tau = zeta cos(alpha0) + b/2 instead: " + std::to_string(good) +
         " roots on the same draws, finite-difference tau_3 " + fmt(fd) + ", exact residual " +
         fmt(ex));
  o.summary = "Heisenberg helices";
  return o;
}

// ---- 6 ------------------------------------------------------------------

struct TypeStats {
  int curves = 0;
  double beta_res = 0.0;
  double unit_speed = 0.0;
  double eq_emitted = 0.0;  // helix equations at the curve's own (kappa, tau)
  double eq_printed = 0.0;  // helix equations at (zeta sin, -zeta cos - b/2)
  double closed_form = 0.0;
};

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

void accumulate(TypeStats& st, const HelixCurve& hc) {
  const auto& p = hc.param;
  const double sa = std::sin(p.alpha0), ca = std::cos(p.alpha0);
  st.beta_res = std::max(st.beta_res,
                         max_abs(beta_ode_residual(hc.curve, hc.beta, p.a, p.b, p.alpha0, p.zeta)));
  st.unit_speed = std::max(st.unit_speed, hc.unit_speed_error);
  const auto fr = th::n3zero_frenet(hc);
  for (std::size_t i = 0; i < fr.kappa.size(); i += 25) {
    st.eq_emitted = std::max(st.eq_emitted, helix_eq_relative(p.a, p.b, fr.kappa[i], fr.tau[i],
                                                              ca, fr.n3[i], sa));
  }
  st.eq_printed = std::max(st.eq_printed, helix_eq_relative(p.a, p.b, p.zeta * sa,
                                                            -p.zeta * ca - p.b / 2, ca, 0.0, sa));
  ++st.curves;
}

// Draws (a, b, alpha0) with a verified P4 root until make() succeeds n times.
TypeStats run_type(const std::function<HelixCurve(double, double, double, double)>& make,
                   bool measured_sign, int n) {
  TypeStats st;
  for (int attempt = 0; attempt < 2000 && st.curves < n; ++attempt) {
    double a = th::uniform(-2, 2);
    if (std::abs(a) < 0.05) continue;
    const double b = th::uniform(-2, 2), al = th::uniform(0.2, std::numbers::pi - 0.2);
    if (std::abs(4 * a - b * b) < 1e-2) continue;
    std::vector<double> zs;
    if (measured_sign) {
      zs = th::measured_sign_roots(a, b, al);
    } else {
      for (const auto& r : p4_roots(a, b, al)) zs.push_back(r.value);
    }
    if (zs.empty()) continue;
    const double z = zs[static_cast<std::size_t>(th::uniform(0, 0.999) * zs.size())];
    try {
      const auto hc = make(a, b, al, z);
      accumulate(st, hc);
      if (hc.param.type == ParamType::kTypeIII) {
        double e = 0.0;
        for (std::size_t i = 0; i < hc.curve.size(); ++i) {
          e = std::max(e, std::abs(hc.curve.points[i][1] -
                                   type_iii_closed_form(hc.param, hc.curve.s[i])));
        }
        st.closed_form = std::max(st.closed_form, e);
      }
    } catch (const Error&) {
      // out of chart, constraint without real offsets, escape: draw again
    }
  }
  return st;
}

HelixParam type_base(ParamType t, double a, double b, double al, double z) {
  HelixParam p;
  p.type = t;
  p.a = a;
  p.b = b;
  p.alpha0 = al;
  p.zeta = z;
  p.interval = {0.0, 1.0};
  p.step = 1e-3;
  return p;
}

HelixCurve make_i(double a, double b, double al, double z) {
  auto p = type_base(ParamType::kTypeI, a, b, al, z);
  p.mu = th::uniform(0.2, 2.0);
  const auto c = type_i_offsets(a, b, al, z, p.mu, th::uniform(0, 2 * std::numbers::pi));
  p.c1 = c[0];
  p.c2 = c[1];
  p.beta_init = th::uniform(-1, 1);
  return parametrize(p);
}

HelixCurve make_ii(double a, double b, double al, double z) {
  auto p = type_base(ParamType::kTypeII, a, b, al, z);
  p.beta0 = th::uniform(0.2, 1.3) * (th::uniform(0, 1) < 0.5 ? 1 : -1);
  p.x_init = th::uniform(-0.3, 0.3);
  return parametrize(p);
}

HelixCurve make_iii(double a, double b, double al, double z) {
  auto p = type_base(ParamType::kTypeIII, a, b, al, z);
  p.sign = th::uniform(0, 1) < 0.5 ? 1 : -1;
  p.y_init = th::uniform(-0.3, 0.3);
  return parametrize(p);
}

Outcome criterion6() {
  Outcome o;
  const char* names[] = {"type (i)", "type (ii)", "type (iii)"};
  const std::function<HelixCurve(double, double, double, double)> makers[] = {make_i, make_ii,
                                                                             make_iii};
  for (int k = 0; k < 3; ++k) {
    const auto st = run_type(makers[k], false, 10);
    const std::string n = names[k];
    o.require(st.curves == 10, n + ": " + std::to_string(st.curves) + " curves from P4 roots");
    o.require(st.beta_res < 1e-8, n + ": beta ODE residual " + fmt(st.beta_res) + " (tol 1e-8)");
    o.require(st.unit_speed < 1e-6, n + ": unit speed error " + fmt(st.unit_speed) + " (tol 1e-6)");
    o.require(st.eq_emitted < 1e-10, n + ": helix equations at the emitted curve's kappa, tau: " +
                                         fmt(st.eq_emitted) + " (tol 1e-10)");
    o.note(n + ": helix equations at the printed kappa0, tau0: " + fmt(st.eq_printed));
    if (k == 2) {
      o.require(st.closed_form < 1e-8,
                n + ": y(s) vs closed form " + fmt(st.closed_form) + " (tol 1e-8)");
    }
    const auto alt = run_type(makers[k], true, 10);
    o.note(n + ", roots at tau = zeta cos(alpha0) + b/2: helix equations at the emitted "
               "curve's kappa, tau " + fmt(alt.eq_emitted) + " over " +
           std::to_string(alt.curves) + " curves");
  }
  o.summary = "explicit N3 = 0 helices, types (i)-(iii)";
  return o;
}

// ---- 7 ------------------------------------------------------------------

Outcome criterion7() {
  Outcome o;
  const auto t0 = Clock::now();
  FlowOptions opt;
  opt.max_iters = 50000;
  const auto res = run_flow(circle_flow_state(1.0, 1.2, 200), opt);
  const double dt = seconds_since(t0);
  const double k = closed_curve_kappa(res.final_state);
  bool monotone = true;
  for (std::size_t i = 1; i < res.log.size(); ++i) {
    monotone = monotone && res.log[i].energy <= res.log[i - 1].energy;
  }
  const int iters = res.log.empty() ? 0 : res.log.back().iter;
  o.require(std::abs(k - std::sqrt(2.0)) < 0.01 * std::sqrt(2.0),
            "final kappa_g " + format_double(k) + " after " + std::to_string(iters) +
                " iterations (target sqrt 2 within 1%)");
  o.require(monotone, "energy non-increasing over " + std::to_string(res.log.size()) +
                          " logged iterations");
  o.note("energy " + format_double(res.log.front().energy) + " -> " +
         format_double(res.log.back().energy) + ", final gradient norm " +
         fmt(res.log.back().grad_norm) + ", converged " + (res.converged ? "yes" : "no"));
  o.require(dt < 120.0, "runtime " + fmt(dt) + " s (limit 120 s)");
  o.summary = "gradient flow from the kappa_g = 1.2 circle";
  return o;
}

// ---- 8 ------------------------------------------------------------------

Outcome criterion8() {
  Outcome o;
  double d5 = 0.0, d10 = 0.0, d10e = 0.0;
  int orbits5 = 0, orbits10 = 0;
  const double rho = 1.0;
  while (orbits5 < 100) {
    FirstIntegralParams p;
    p.tau0 = th::uniform(-1, 1);
    p.c1 = th::uniform(-1, 1);
    const double k = th::uniform(0.5, 1.5), kp = th::uniform(-0.8, 0.8);
    p.c2 = 5 * kp * kp + 2 * p.c1 / k - std::pow(k, 4) - (5.0 / 3) * p.tau0 * p.tau0 * k * k;
    FirstIntegralOptions fo;
    fo.slope_sign = kp < 0 ? -1 : 1;
    FirstIntegralSolution sol;
    try {
      sol = solve_first_integral(p, k, {0.0, 0.3}, fo);
    } catch (const Error&) {
      continue;
    }
    ++orbits5;
    for (std::size_t i = 0; i < sol.s.size(); i += 10) {
      const double kk = sol.kappa[i], kpp = sol.kappa_prime[i];
      // the binormal integral's constant at this point of the orbit
      const double c0 = 4 * kpp * kpp - kk * kk * (rho - kk * kk / 4);
      const double scale = 21 * std::pow(kk, 5) +
                           std::abs((80.0 / 3 * p.tau0 * p.tau0 - 20 * rho) * std::pow(kk, 3)) +
                           std::abs((16 * p.c2 - 20 * c0) * kk) + std::abs(32 * p.c1);
      d5 = std::max(d5, std::abs(degree5_witness(kk, p.tau0, rho, c0, p.c1, p.c2)) / scale);
    }
  }
  while (orbits10 < 100) {
    FirstIntegralParams p;
    p.c1 = th::uniform(-1, 1);
    const double k = th::uniform(0.5, 1.8), kp = th::uniform(-0.8, 0.8);
    p.c2 = 5 * kp * kp + 2 * p.c1 / k - std::pow(k, 4);
    FirstIntegralOptions fo;
    fo.slope_sign = kp < 0 ? -1 : 1;
    FirstIntegralSolution sol;
    try {
      sol = solve_first_integral(p, k, {0.0, 0.3}, fo);
    } catch (const Error&) {
      continue;
    }
    ++orbits10;
    for (std::size_t i = 0; i < sol.s.size(); i += 10) {
      const auto j = first_integral_jet(p.c1, sol.kappa[i], sol.kappa_prime[i]);
      const double kk = j[0];
      const double den = j[2] - 2 * kk * kk * kk;
      if (std::abs(den) < 1e-3) continue;
      // Gaussian curvature that makes the normal equation hold here
      const double gk =
          -(j[4] - 15 * kk * j[1] * j[1] - 10 * kk * kk * j[2] + std::pow(kk, 5)) / den;
      const double scale = 126 * std::pow(kk, 10) + std::abs(63 * p.c2 * std::pow(kk, 6)) +
                           std::abs(40 * gk * std::pow(kk, 8)) +
                           std::abs(84 * p.c1 * std::pow(kk, 5)) +
                           std::abs(5 * p.c1 * gk * std::pow(kk, 3)) +
                           std::abs(6 * p.c1 * p.c2 * kk) + 14 * p.c1 * p.c1;
      d10 = std::max(d10, std::abs(degree10_witness(kk, p.c1, p.c2, gk)) / scale);
      d10e = std::max(d10e, std::abs(degree10_elimination_witness(kk, p.c1, p.c2, gk)) / scale);
    }
  }
  o.require(d5 < 1e-7, "degree 5 along 100 orbits: max relative value " + fmt(d5) + " (tol 1e-7)");
  o.require(d10 < 1e-7,
            "degree 10 as printed along 100 orbits: max relative value " + fmt(d10) + " (tol 1e-7)");
  o.note("degree 10 with leading term 126 k^10 along the same orbits: " + fmt(d10e));

  double min5 = 1e300, min10 = 1e300, min10e = 1e300;
  for (int i = 0; i < 100; ++i) {
    const double k = th::uniform(0.2, 2), t0 = th::uniform(-1, 1), c0 = th::uniform(-1, 1);
    const double c1 = th::uniform(-1, 1), c2 = th::uniform(-1, 1), gk = th::uniform(-2, 2);
    const double s5 = 21 * std::pow(k, 5) + std::abs((80.0 / 3 * t0 * t0 - 20 * rho) * k * k * k) +
                      std::abs((16 * c2 - 20 * c0) * k) + std::abs(32 * c1);
    min5 = std::min(min5, std::abs(degree5_witness(k, t0, rho, c0, c1, c2)) / s5);
    const double s10 = 126 * std::pow(k, 10) + std::abs(63 * c2 * std::pow(k, 6)) +
                       std::abs(40 * gk * std::pow(k, 8)) + std::abs(84 * c1 * std::pow(k, 5)) +
                       std::abs(5 * c1 * gk * std::pow(k, 3)) + std::abs(6 * c1 * c2 * k) +
                       14 * c1 * c1;
    min10 = std::min(min10, std::abs(degree10_witness(k, c1, c2, gk)) / s10);
    min10e = std::min(min10e, std::abs(degree10_elimination_witness(k, c1, c2, gk)) / s10);
  }
  o.require(min5 > 1e-6 && min10 > 1e-6,
            "generic random inputs: smallest relative value degree 5 " + fmt(min5) +
                ", degree 10 " + fmt(min10) + " (need > 1e-6)");
  o.note("generic random inputs, degree 10 with 126 k^10: smallest " + fmt(min10e));
  o.summary = "witness polynomials";
  return o;
}

// ---- 9 ------------------------------------------------------------------

CurveSamples radial_geodesic() {
  CurveSamples c;
  c.manifold = ManifoldModel::space_form3(-1.0);
  const Vec3 dir = Vec3(1, 2, -1).normalized();
  for (int i = 0; i < 4000; ++i) {
    const double s = 0.1 + 1e-3 * i;
    c.s.push_back(s);
    c.points.push_back(2 * std::tanh(s / 2) * dir);
  }
  return c;
}

void save(const std::filesystem::path& p, const CurveSamples& c) {
  std::ofstream f(p);
  write_curve_csv(f, c);
}

#ifdef TRIKURVE_HAVE_CLI
int tool(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  return cli::run(args, out, err, [](const std::string&) { return std::nullopt; });
}
#endif

Outcome criterion9() {
  Outcome o;
  const auto dir = std::filesystem::temp_directory_path() / "trikurve_acceptance";
  std::filesystem::create_directories(dir);

  auto rec = reconstruct_r3(FrenetProfile::theorem_existence(), {1.0, 2.0}, 1e-4);
  const auto clean = dir / "directrix.csv";
  const auto bad = dir / "directrix_corrupted.csv";
  save(clean, rec.curve);
  rec.curve.points[rec.curve.size() / 2] += Vec3(1e-2, -1e-2, 0.0);
  save(bad, rec.curve);

  const auto geo = radial_geodesic();
  double g[3];
  for (int r = 1; r <= 3; ++r) g[r - 1] = tension_r(geo, r).max_abs();
  o.require(g[0] < 1e-6 && g[1] < 1e-6 && g[2] < 1e-6,
            "radial geodesic of M^3(-1): max |tau_r| for r = 1, 2, 3: " + fmt(g[0]) + ", " +
                fmt(g[1]) + ", " + fmt(g[2]) + " (tol 1e-6)");

  const auto circle = spaceform2_circle(1.0, std::sqrt(2.0), 3000, 1e-3);
  const double bi = tension_r(circle, 2).max_relative();
  const double tri = tension_r(circle, 3).max_relative();
  o.require(bi > 0.1 && tri < 1e-6, "kappa_g^2 = 2 rho circle on S^2(1): biharmonic relative "
                                    "residual " + fmt(bi) + ", triharmonic " + fmt(tri));

#ifdef TRIKURVE_HAVE_CLI
  const auto gpath = dir / "geodesic.csv";
  const auto cpath = dir / "circle.csv";
  save(gpath, geo);
  save(cpath, circle);
  const int ok_clean =
      tool({"verify", "--curve", clean.string(), "--model", "euclidean", "--surface", "ruled"});
  const int ok_bad =
      tool({"verify", "--curve", bad.string(), "--model", "euclidean", "--surface", "ruled"});
  o.require(ok_clean == 0 && ok_bad == 1, "verify: clean directrix exits " +
                                              std::to_string(ok_clean) + ", corrupted exits " +
                                              std::to_string(ok_bad));
  std::string codes;
  bool geo_ok = true;
  for (const char* r : {"1", "2", "3"}) {
    const int c = tool({"verify", "--curve", gpath.string(), "--model", "spaceform3", "--rho",
                        "-1", "--order", r});
    geo_ok = geo_ok && c == 0;
    codes += std::string(codes.empty() ? "" : ", ") + std::to_string(c);
  }
  o.require(geo_ok, "verify on the geodesic, orders 1, 2, 3: exit " + codes);
  const int c2 = tool({"verify", "--curve", cpath.string(), "--model", "spaceform2", "--rho", "1",
                       "--order", "2"});
  const int c3 = tool({"verify", "--curve", cpath.string(), "--model", "spaceform2", "--rho", "1",
                       "--order", "3"});
  o.require(c2 == 1 && c3 == 0, "verify on the circle: order 2 exits " + std::to_string(c2) +
                                    ", order 3 exits " + std::to_string(c3));
#else
  const double corrupted = check_ruled_directrix(rec.curve).max_relative();
  o.require(corrupted > 1e-6, "corrupted directrix relative residual " + fmt(corrupted));
#endif
  o.summary = "negative controls";
  return o;
}

}  // namespace

int main() {
  const std::function<Outcome()> criteria[] = {criterion1, criterion2, criterion3,
                                               criterion4, criterion5, criterion6,
                                               criterion7, criterion8, criterion9};
  int failed = 0;
  for (int i = 0; i < 9; ++i) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o.pass = false;
      o.summary = std::string("threw: ") + e.what();
    }
    const double dt = seconds_since(t0);
    std::cout << (o.pass ? "PASS " : "FAIL ") << i + 1 << "  " << o.summary << "  [" << fmt(dt)
              << " s]\n";
    for (const auto& d : o.detail) std::cout << "       " << d << "\n";
    std::cout.flush();
    if (!o.pass) ++failed;
  }
  std::cout << (9 - failed) << " of 9 criteria pass\n";
  return failed == 0 ? 0 : 1;
}
