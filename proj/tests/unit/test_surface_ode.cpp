#include <cmath>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "trikurve/differentiation.hpp"
#include "trikurve/error.hpp"
#include "trikurve/surface_ode.hpp"

using namespace trikurve;

namespace {

std::array<double, 5> sqrt5_jet(double s) {
  const double c = std::sqrt(5.0);
  return {c / s, -c / (s * s), 2 * c / std::pow(s, 3), -6 * c / std::pow(s, 4),
          24 * c / std::pow(s, 5)};
}

// Random (c1, c2, kappa_init) with k'(s0) = kp by construction.
FirstIntegralParams random_params(double k, double kp) {
  FirstIntegralParams p;
  p.c1 = th::uniform(-1, 1);
  p.c2 = 5 * kp * kp + 2 * p.c1 / k - k * k * k * k;
  return p;
}

}  // namespace

TEST_CASE("surface residual closed forms") {
  SUBCASE("geodesic") {
    const auto r = surface_residual({0, 0, 0, 0, 0}, 1.3);
    CHECK(r.res1 == 0.0);
    CHECK(r.res2 == 0.0);
  }
  SUBCASE("constant curvature with K = k^2 / 2") {
    const double k = 1.7;
    const auto r = surface_residual({k, 0, 0, 0, 0}, k * k / 2);
    CHECK(r.res1 == 0.0);
    CHECK(std::abs(r.res2) < 1e-13);
  }
  SUBCASE("sqrt(5)/s with K = -63 / (4 s^2)") {
    for (double s = 1.0; s <= 2.0; s += 0.01) {
      const auto r = surface_residual(sqrt5_jet(s), -63.0 / (4 * s * s));
      CHECK(std::abs(r.res1) < 1e-12);
      CHECK(std::abs(r.res2) < 1e-9);
    }
  }
}

TEST_CASE("torsion from the normal equation") {
  for (double s = 1.0; s <= 2.0; s += 0.1) {
    const double t = torsion_from_eq22(sqrt5_jet(s));
    CHECK(t == doctest::Approx(3 * std::sqrt(7.0) / (2 * s)).epsilon(1e-13));
    CHECK(t / (std::sqrt(5.0) / s) == doctest::Approx(1.5 * std::sqrt(7.0 / 5.0)));
  }
  try {
    (void)torsion_from_eq22({1.0, 0, 0, 0, 0});
    FAIL("constant curvature should be rejected");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDegenerateDenominator);
  }
}

TEST_CASE("kappa'' - 2 kappa^3 = -8 sqrt(5) / s^3 on the closed form") {
  for (double s = 1.0; s <= 2.0; s += 0.25) {
    const auto j = sqrt5_jet(s);
    CHECK(j[2] - 2 * std::pow(j[0], 3) == doctest::Approx(-8 * std::sqrt(5.0) / std::pow(s, 3)));
  }
}

TEST_CASE("first integral with c1 = c2 = 0 reproduces sqrt(5)/s") {
  FirstIntegralParams p;
  const auto sol = solve_first_integral(p, std::sqrt(5.0), {1.0, 2.0});
  REQUIRE(sol.s.size() == 1001);
  for (std::size_t i = 0; i < sol.s.size(); i += 50) {
    CHECK(sol.kappa[i] == doctest::Approx(std::sqrt(5.0) / sol.s[i]).epsilon(1e-10));
  }
}

TEST_CASE("first integral invariants along random orbits") {
  int used = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const double k = th::uniform(0.5, 1.5), kp = th::uniform(-0.8, 0.8);
    const auto p = random_params(k, kp);
    FirstIntegralOptions o;
    o.slope_sign = kp < 0 ? -1 : 1;
    FirstIntegralSolution sol;
    try {
      sol = solve_first_integral(p, k, {0.0, 0.3}, o);
    } catch (const Error&) {
      continue;
    }
    ++used;
    bool sign_fixed = true;
    const double sign0 = sol.kappa_second[0] - 2 * std::pow(sol.kappa[0], 3) > 0 ? 1 : -1;
    for (std::size_t i = 0; i < sol.s.size(); ++i) {
      const double kk = sol.kappa[i];
      const double lhs = 5 * sol.kappa_prime[i] * sol.kappa_prime[i];
      const double rhs = p.c2 - 2 * p.c1 / kk + std::pow(kk, 4);
      CHECK(std::abs(lhs - rhs) < 1e-8 * std::max(1.0, std::abs(rhs)));
      CHECK(sol.kappa_second[i] ==
            doctest::Approx(p.c1 / (5 * kk * kk) + 0.4 * kk * kk * kk).epsilon(1e-12));
      const double d = sol.kappa_second[i] - 2 * kk * kk * kk;
      sign_fixed = sign_fixed && d * sign0 > 0;
    }
    // k'' - 2 k^3 = c1 / (5 k^2) - 8 k^3 / 5 can only vanish where 8 k^5 = c1
    if (p.c1 <= 0.0) CHECK(sign_fixed);
  }
  CHECK(used > 50);
}

TEST_CASE("k'' = 2 k^3 is reached where 8 k^5 = c1") {
  FirstIntegralParams p;
  p.c1 = 8.0;  // crossing at k = 1
  p.c2 = 5 * 4.0 + 2 * p.c1 / 1.2 - std::pow(1.2, 4);  // k'(0) = -2
  const auto sol = solve_first_integral(p, 1.2, {0.0, 0.5});
  bool crossed = false;
  for (std::size_t i = 1; i < sol.s.size(); ++i) {
    const double d0 = sol.kappa_second[i - 1] - 2 * std::pow(sol.kappa[i - 1], 3);
    const double d1 = sol.kappa_second[i] - 2 * std::pow(sol.kappa[i], 3);
    if (d0 * d1 <= 0) {
      crossed = true;
      CHECK(sol.kappa[i] == doctest::Approx(1.0).epsilon(1e-2));
    }
  }
  CHECK(crossed);
}

TEST_CASE("turning points are crossed") {
  // k'(0) = 0 with k'' > 0: the orbit turns and k' changes sign.
  FirstIntegralParams p;
  const double k = 1.0;
  p.c1 = 0.5;
  p.c2 = 2 * p.c1 / k - 1.0;
  const auto sol = solve_first_integral(p, k, {0.0, 0.5});
  CHECK(sol.kappa_prime.front() == doctest::Approx(0.0));
  CHECK(sol.kappa_prime.back() > 0.0);
}

TEST_CASE("first integral errors") {
  FirstIntegralParams p;
  p.c2 = -10.0;
  try {
    (void)solve_first_integral(p, 1.0, {0, 1});
    FAIL("expected NegativeRadicand");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNegativeRadicand);
  }
  // c2 - 2 c1 / k + k^4 with a double root at k = 1
  FirstIntegralParams q;
  q.c1 = -2.0;
  q.c2 = -5.0;
  try {
    (void)solve_first_integral(q, 1.0, {0, 1});
    FAIL("expected StalledAtDoubleRoot");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kStalledAtDoubleRoot);
  }
}

TEST_CASE("first_integral_jet matches differentiated orbits") {
  FirstIntegralParams p;
  p.c1 = 0.3;
  p.c2 = 2.0;
  const auto sol = solve_first_integral(p, 1.0, {0.0, 0.4}, {1, 1e-4, 1e-13, 1e-14});
  const GridDifferentiator d1(sol.s, 10, 8, 1);
  const auto k3 = d1.apply(sol.kappa_second);
  const std::size_t i = sol.s.size() / 2;
  const auto jet = first_integral_jet(p.c1, sol.kappa[i], sol.kappa_prime[i]);
  CHECK(jet[2] == doctest::Approx(sol.kappa_second[i]).epsilon(1e-12));
  CHECK(jet[3] == doctest::Approx(k3[i]).epsilon(1e-9));
}

TEST_CASE("degree-10 witness") {
  CHECK(degree10_witness(1.3, 0, 0, 0) ==
        doctest::Approx(51 * std::pow(1.3, 10) + 75 * std::pow(1.3, 9)));
  // Recombination: along an orbit of the first integral pick K pointwise so
  // that the normal equation holds; an honest witness must vanish there.
  FirstIntegralParams p;
  p.c1 = 0.4;
  p.c2 = 3.0;
  const auto sol = solve_first_integral(p, 1.6, {0.0, 0.3});
  double worst_elim = 0.0, worst_printed = 0.0;
  for (std::size_t i = 0; i < sol.s.size(); i += 10) {
    const auto j = first_integral_jet(p.c1, sol.kappa[i], sol.kappa_prime[i]);
    const double k = j[0];
    const double num = j[4] - 15 * k * j[1] * j[1] - 10 * k * k * j[2] + std::pow(k, 5);
    const double gk = -num / (j[2] - 2 * k * k * k);
    const double c2 = 5 * j[1] * j[1] + 2 * p.c1 / k - std::pow(k, 4);
    const double scale = 126 * std::pow(k, 10) + std::abs(63 * c2 * std::pow(k, 6)) +
                         std::abs(40 * gk * std::pow(k, 8)) + std::abs(84 * p.c1 * std::pow(k, 5));
    worst_elim = std::max(worst_elim,
                          std::abs(degree10_elimination_witness(k, p.c1, c2, gk)) / scale);
    worst_printed =
        std::max(worst_printed, std::abs(degree10_witness(k, p.c1, c2, gk)) / scale);
  }
  CHECK(worst_elim < 1e-12);
  // the printed coefficients do not recombine to zero (they agree at k = 1 only)
  CHECK(worst_printed > 1e-3);
  CHECK(degree10_witness(1.0, 0.4, 3.0, 0.7) ==
        doctest::Approx(degree10_elimination_witness(1.0, 0.4, 3.0, 0.7)));
}

TEST_CASE("degree-5 witness") {
  const double rho = 1.3;
  CHECK(degree5_witness(0.7, std::sqrt(0.75 * rho), rho, 0, 0, 0) ==
        doctest::Approx(21 * std::pow(0.7, 5)));
  CHECK(degree5_witness(0.0, 0.4, rho, 0.2, 0.5, 0.1) == doctest::Approx(-16.0));
  // At any (k, k') both integrals hold for suitable c0, c2; the witness is
  // their difference times 16 k.
  for (int trial = 0; trial < 100; ++trial) {
    const double k = th::uniform(0.2, 2), kp = th::uniform(-1, 1), t0 = th::uniform(-1, 1);
    const double c1 = th::uniform(-1, 1);
    const double c0 = 4 * kp * kp - k * k * (rho - k * k / 4);
    const double c2 = 5 * kp * kp + 2 * c1 / k - std::pow(k, 4) - (5.0 / 3) * t0 * t0 * k * k;
    const double scale = 21 * std::pow(k, 5) + std::abs(32 * c1) + std::abs(16 * c2 * k) +
                         std::abs(20 * c0 * k) + std::abs(20 * rho * k * k * k);
    CHECK(std::abs(degree5_witness(k, t0, rho, c0, c1, c2)) / scale < 1e-13);
  }
}
