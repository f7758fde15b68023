#include <cmath>
#include <numbers>

#include "doctest.h"
#include "helpers.hpp"
#include "trikurve/energy_flow.hpp"
#include "trikurve/error.hpp"

using namespace trikurve;

namespace {

FlowState wobbly_circle(std::size_t n) {
  FlowState s = circle_flow_state(1.0, 1.2, n);
  for (auto& p : s.points) {
    p[0] += 1e-3 * th::uniform(-1, 1);
    p[1] += 1e-3 * th::uniform(-1, 1);
  }
  return make_flow_state(s.points, s.manifold, true);
}

}  // namespace

TEST_CASE("closed circles report their geodesic curvature") {
  for (double kg : {0.5, 1.2, std::sqrt(2.0)}) {
    const auto s = circle_flow_state(1.0, kg, 200);
    CHECK(closed_curve_kappa(s) == doctest::Approx(kg).epsilon(1e-3));
  }
}

TEST_CASE("automatic gradient matches central differences") {
  const auto s = wobbly_circle(40);
  const auto g = trienergy_gradient(s);
  const auto fd = trienergy_gradient_fd(s, 1e-5, true);
  double scale = 0.0, diff = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    scale = std::max(scale, g[i].cwiseAbs().maxCoeff());
    diff = std::max(diff, (g[i] - fd[i]).cwiseAbs().maxCoeff());
    CHECK(g[i][2] == 0.0);
  }
  CHECK(diff / scale < 1e-5);
}

TEST_CASE("gradient on a three-dimensional model") {
  std::vector<Vec3> pts;
  const std::size_t n = 30;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = 2 * std::numbers::pi * static_cast<double>(i) / n;
    pts.emplace_back(0.3 * std::cos(t), 0.3 * std::sin(t), 0.05 * std::sin(2 * t));
  }
  const auto s = make_flow_state(pts, ManifoldModel::bcv(0.5, 1.0), true);
  const auto g = trienergy_gradient(s);
  const auto fd = trienergy_gradient_fd(s, 1e-5, true);
  double scale = 0.0, diff = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    scale = std::max(scale, g[i].cwiseAbs().maxCoeff());
    diff = std::max(diff, (g[i] - fd[i]).cwiseAbs().maxCoeff());
  }
  CHECK(diff / scale < 1e-5);
}

TEST_CASE("energy never increases along the flow") {
  FlowOptions o;
  o.max_iters = 300;
  const auto res = run_flow(wobbly_circle(60), o);
  REQUIRE(res.log.size() > 10);
  for (std::size_t i = 1; i < res.log.size(); ++i) {
    CHECK(res.log[i].energy <= res.log[i - 1].energy);
  }
}

TEST_CASE("circle gradient probe") {
  SUBCASE("centred circles are discretely critical") {
    const auto p = circle_gradient_probe(1.0, 2.0, 1e-2, 0.0);
    CHECK(p.gradient_norm < 1e-15);
  }
  SUBCASE("tilted circles converge at second order") {
    const auto p1 = circle_gradient_probe(1.0, 2.0, 2e-2, 0.4);
    const auto p2 = circle_gradient_probe(1.0, 2.0, 1e-2, 0.4);
    const double order = std::log(p1.gradient_norm / p2.gradient_norm) / std::log(p1.h / p2.h);
    CHECK(order == doctest::Approx(2.0).epsilon(0.1));
  }
  SUBCASE("a non-critical circle is not") {
    const auto p = circle_gradient_probe(1.0, 3.0, 1e-2, 0.4);
    CHECK(p.gradient_norm > 1e-2);
  }
  CHECK_THROWS_AS(circle_gradient_probe(-1.0, 2.0, 1e-2, 0.0), Error);
}

TEST_CASE("discrete energy errors") {
  try {
    (void)circle_flow_state(1.0, 1.0, 8);
    FAIL("expected TooFewVertices");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kTooFewVertices);
  }
  auto t = circle_flow_state(1.0, 1.0, 40);
  t.points[3] = 0.5 * (t.points[3] + t.points[4]);
  try {
    (void)discrete_trienergy(t);
    FAIL("expected NonUniform");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNonUniform);
  }
  const auto r = respace(t);
  CHECK_NOTHROW((void)discrete_trienergy(r));
}
