#include "trikurve/geometry.hpp"

#include <cmath>
#include <sstream>

#include "trikurve/error.hpp"

namespace trikurve {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Conformal constant-curvature chart in `dim` variables.
struct Conformal {
  double rho;
  int dim;

  double lambda(const Vec3& p) const {
    double r2 = 0.0;
    for (int k = 0; k < dim; ++k) r2 += p[k] * p[k];
    return 1.0 + 0.25 * rho * r2;
  }
};

// Chart data of the normal ruled surface at (u, v).
struct RuledLocal {
  double e;     // sqrt(E)
  double e_v;   // d e / dv
  double e_vv;  // d^2 e / dv^2
};

RuledLocal ruled_local(const RuledSurface& r, const Vec3& p) {
  const double u = p[0];
  const double v = p[1];
  const double k = r.directrix.kappa(u);
  const double t = r.directrix.tau(u);
  const double big_e = (1.0 - v * k) * (1.0 - v * k) + v * v * t * t;
  const double big_e_v = -2.0 * k * (1.0 - v * k) + 2.0 * v * t * t;
  const double big_e_vv = 2.0 * k * k + 2.0 * t * t;
  const double e = std::sqrt(big_e);
  return {e, big_e_v / (2.0 * e),
          big_e_vv / (2.0 * e) - big_e_v * big_e_v / (4.0 * e * e * e)};
}

void require_in_chart(const ManifoldModel& m, const Vec3& p) {
  if (!in_chart(m, p)) {
    std::ostringstream os;
    os << "point (" << p[0] << ", " << p[1] << ", " << p[2]
       << ") outside the chart of " << m.describe();
    throw Error(ErrorCode::kOutOfChart, os.str());
  }
}

const ManifoldModel& product_base(const ProductWithLine& pr) { return *pr.base; }

// Riemann tensor of a constant-curvature block acting on the first `dim`
// components.
Vec3 constant_curvature_riemann(double k, int dim, const Vec3& x, const Vec3& y,
                                const Vec3& z) {
  Vec3 xh = x, yh = y, zh = z;
  for (int i = dim; i < 3; ++i) xh[i] = yh[i] = zh[i] = 0.0;
  return k * (yh.dot(zh) * xh - xh.dot(zh) * yh);
}

Vec3 bcv_riemann(double a, double b, const Vec3& x, const Vec3& y, const Vec3& z) {
  const double c1 = 4.0 * a - 0.75 * b * b;
  const double c2 = 4.0 * a - b * b;
  const Vec3 e3 = Vec3::UnitZ();
  return c1 * (y.dot(z) * x - x.dot(z) * y) -
         c2 * (y[2] * z[2] * x - x[2] * z[2] * y + x[2] * y.dot(z) * e3 -
               y[2] * x.dot(z) * e3);
}

ConnectionCoefficients bcv_connection(double a, double b, const Vec3& p) {
  const double x = p[0];
  const double y = p[1];
  ConnectionCoefficients c;
  auto& g1 = c.gamma[0];
  auto& g2 = c.gamma[1];
  auto& g3 = c.gamma[2];
  g1(1, 0) = 2.0 * a * y;
  g1(0, 1) = -2.0 * a * y;
  g1(2, 1) = 0.5 * b;
  g1(1, 2) = -0.5 * b;
  g2(1, 0) = -2.0 * a * x;
  g2(0, 1) = 2.0 * a * x;
  g2(2, 0) = -0.5 * b;
  g2(0, 2) = 0.5 * b;
  g3(1, 0) = -0.5 * b;
  g3(0, 1) = 0.5 * b;
  return c;
}

ConnectionCoefficients conformal_connection(const Conformal& cf, const Vec3& p) {
  // nabla_{E_i} E_j = -d_j(lambda) E_i + delta_ij grad(lambda).
  ConnectionCoefficients c;
  for (int i = 0; i < cf.dim; ++i) {
    for (int j = 0; j < cf.dim; ++j) {
      c.gamma[i](i, j) -= 0.5 * cf.rho * p[j];
    }
    for (int k = 0; k < cf.dim; ++k) {
      c.gamma[i](k, i) += 0.5 * cf.rho * p[k];
    }
  }
  return c;
}

ConnectionCoefficients ruled_connection(const RuledSurface& r, const Vec3& p) {
  const RuledLocal loc = ruled_local(r, p);
  ConnectionCoefficients c;
  c.gamma[0](1, 0) = -loc.e_v / loc.e;
  c.gamma[0](0, 1) = loc.e_v / loc.e;
  return c;
}

}  // namespace

ManifoldModel ManifoldModel::space_form2(double rho) {
  return ManifoldModel(SpaceForm2{rho});
}

ManifoldModel ManifoldModel::space_form3(double rho) {
  return ManifoldModel(SpaceForm3{rho});
}

ManifoldModel ManifoldModel::bcv(double a, double b) {
  if (std::abs(4.0 * a - b * b) <= 1e-14 * std::max(1.0, std::abs(4.0 * a))) {
    std::ostringstream os;
    os << "BCV(a=" << a << ", b=" << b << ") has 4a = b^2 and is a space form";
    throw Error(ErrorCode::kSpaceFormDegenerate, os.str());
  }
  return ManifoldModel(Bcv{a, b});
}

ManifoldModel ManifoldModel::bcv_unchecked(double a, double b) {
  return ManifoldModel(Bcv{a, b});
}

ManifoldModel ManifoldModel::ruled(FrenetProfile directrix) {
  return ManifoldModel(RuledSurface{std::move(directrix)});
}

ManifoldModel ManifoldModel::product_with_line(const ManifoldModel& base) {
  if (!base.is_surface()) {
    throw Error(ErrorCode::kUnsupported,
                "product_with_line expects a surface base, got " + base.describe());
  }
  return ManifoldModel(ProductWithLine{std::make_shared<const ManifoldModel>(base)});
}

int ManifoldModel::dimension() const {
  return std::visit(Overloaded{[](const SpaceForm2&) { return 2; },
                               [](const SpaceForm3&) { return 3; },
                               [](const Bcv&) { return 3; },
                               [](const RuledSurface&) { return 2; },
                               [](const ProductWithLine&) { return 3; }},
                    kind_);
}

std::string ManifoldModel::describe() const {
  std::ostringstream os;
  std::visit(Overloaded{[&](const SpaceForm2& k) { os << "M2(rho=" << k.rho << ")"; },
                        [&](const SpaceForm3& k) { os << "M3(rho=" << k.rho << ")"; },
                        [&](const Bcv& k) { os << "BCV(a=" << k.a << ", b=" << k.b << ")"; },
                        [&](const RuledSurface&) { os << "RuledSurface"; },
                        [&](const ProductWithLine& k) {
                          os << product_base(k).describe() << " x R";
                        }},
             kind_);
  return os.str();
}

bool in_chart(const ManifoldModel& m, const Vec3& p) {
  if (!p.allFinite()) return false;
  return std::visit(
      Overloaded{
          [&](const SpaceForm2& k) { return Conformal{k.rho, 2}.lambda(p) > 0.0; },
          [&](const SpaceForm3& k) { return Conformal{k.rho, 3}.lambda(p) > 0.0; },
          [&](const Bcv& k) { return 1.0 + k.a * (p[0] * p[0] + p[1] * p[1]) > 0.0; },
          [&](const RuledSurface& k) {
            const Interval d = k.directrix.domain();
            if (!d.contains(p[0], 1e-9 * std::max(1.0, d.length()))) return false;
            const double kap = k.directrix.kappa(p[0]);
            const double tau = k.directrix.tau(p[0]);
            const double v = p[1];
            return (1.0 - v * kap) * (1.0 - v * kap) + v * v * tau * tau > 0.0;
          },
          [&](const ProductWithLine& k) { return in_chart(product_base(k), p); }},
      m.kind());
}

Mat3 metric_at(const ManifoldModel& m, const Vec3& p) {
  require_in_chart(m, p);
  return std::visit(
      Overloaded{[&](const SpaceForm2& k) -> Mat3 {
                   const double l = Conformal{k.rho, 2}.lambda(p);
                   return Vec3(1.0 / (l * l), 1.0 / (l * l), 1.0).asDiagonal();
                 },
                 [&](const SpaceForm3& k) -> Mat3 {
                   const double l = Conformal{k.rho, 3}.lambda(p);
                   return Mat3::Identity() / (l * l);
                 },
                 [&](const Bcv& k) -> Mat3 {
                   const double l = 1.0 + k.a * (p[0] * p[0] + p[1] * p[1]);
                   const Vec3 w(0.5 * k.b * p[1] / l, -0.5 * k.b * p[0] / l, 1.0);
                   Mat3 g = w * w.transpose();
                   g(0, 0) += 1.0 / (l * l);
                   g(1, 1) += 1.0 / (l * l);
                   return g;
                 },
                 [&](const RuledSurface& k) -> Mat3 {
                   const double e = ruled_local(k, p).e;
                   return Vec3(e * e, 1.0, 1.0).asDiagonal();
                 },
                 [&](const ProductWithLine& k) -> Mat3 {
                   Mat3 g = metric_at(product_base(k), p);
                   g(2, 2) = 1.0;
                   return g;
                 }},
      m.kind());
}

FramePoint frame_at(const ManifoldModel& m, const Vec3& p) {
  require_in_chart(m, p);
  Mat3 f = std::visit(
      Overloaded{[&](const SpaceForm2& k) -> Mat3 {
                   const double l = Conformal{k.rho, 2}.lambda(p);
                   return Vec3(l, l, 1.0).asDiagonal();
                 },
                 [&](const SpaceForm3& k) -> Mat3 {
                   return Mat3::Identity() * Conformal{k.rho, 3}.lambda(p);
                 },
                 [&](const Bcv& k) -> Mat3 {
                   const double l = 1.0 + k.a * (p[0] * p[0] + p[1] * p[1]);
                   Mat3 e;
                   e << l, 0.0, 0.0,
                        0.0, l, 0.0,
                        -0.5 * k.b * p[1], 0.5 * k.b * p[0], 1.0;
                   return e;
                 },
                 [&](const RuledSurface& k) -> Mat3 {
                   return Vec3(1.0 / ruled_local(k, p).e, 1.0, 1.0).asDiagonal();
                 },
                 [&](const ProductWithLine& k) -> Mat3 {
                   Mat3 e = frame_at(product_base(k), p).frame;
                   e(2, 2) = 1.0;
                   return e;
                 }},
      m.kind());
  return {p, f};
}

Vec3 to_frame(const ManifoldModel& m, const Vec3& p, const Vec3& v) {
  if (const auto* k = m.as<Bcv>()) {
    require_in_chart(m, p);
    const double l = 1.0 + k->a * (p[0] * p[0] + p[1] * p[1]);
    const double f1 = v[0] / l;
    const double f2 = v[1] / l;
    return {f1, f2, v[2] + 0.5 * k->b * (p[1] * f1 - p[0] * f2)};
  }
  // Every other model has a diagonal frame matrix.
  const Mat3 f = frame_at(m, p).frame;
  return {v[0] / f(0, 0), v[1] / f(1, 1), v[2] / f(2, 2)};
}

Vec3 to_chart(const ManifoldModel& m, const Vec3& p, const Vec3& v) {
  return frame_at(m, p).frame * v;
}

ConnectionCoefficients connection_in_frame(const ManifoldModel& m, const Vec3& p) {
  require_in_chart(m, p);
  return std::visit(
      Overloaded{
          [&](const SpaceForm2& k) { return conformal_connection({k.rho, 2}, p); },
          [&](const SpaceForm3& k) { return conformal_connection({k.rho, 3}, p); },
          [&](const Bcv& k) { return bcv_connection(k.a, k.b, p); },
          [&](const RuledSurface& k) { return ruled_connection(k, p); },
          [&](const ProductWithLine& k) { return connection_in_frame(product_base(k), p); }},
      m.kind());
}

CurvatureComponents curvature_components(const ManifoldModel& m) {
  return std::visit(
      Overloaded{[](const SpaceForm2& k) { return CurvatureComponents{k.rho, 0.0, 0.0}; },
                 [](const SpaceForm3& k) { return CurvatureComponents{k.rho, k.rho, k.rho}; },
                 [](const Bcv& k) {
                   return CurvatureComponents{4.0 * k.a - 0.75 * k.b * k.b,
                                              0.25 * k.b * k.b, 0.25 * k.b * k.b};
                 },
                 [](const RuledSurface&) -> CurvatureComponents {
                   throw Error(ErrorCode::kUnsupported,
                               "curvature_components: use gaussian_curvature on a ruled surface");
                 },
                 [](const ProductWithLine& k) {
                   if (const auto* sf = k.base->as<SpaceForm2>()) {
                     return CurvatureComponents{sf->rho, 0.0, 0.0};
                   }
                   throw Error(ErrorCode::kUnsupported,
                               "curvature_components: ruled surface base has variable curvature");
                 }},
      m.kind());
}

double gaussian_curvature(const ManifoldModel& m, const Vec3& p) {
  require_in_chart(m, p);
  if (const auto* k = m.as<SpaceForm2>()) return k->rho;
  if (const auto* k = m.as<RuledSurface>()) {
    const RuledLocal loc = ruled_local(*k, p);
    return -loc.e_vv / loc.e;
  }
  throw Error(ErrorCode::kUnsupported, "gaussian_curvature on " + m.describe());
}

Vec3 riemann_apply(const ManifoldModel& m, const Vec3& p, const Vec3& x,
                   const Vec3& y, const Vec3& z) {
  require_in_chart(m, p);
  return std::visit(
      Overloaded{
          [&](const SpaceForm2& k) { return constant_curvature_riemann(k.rho, 2, x, y, z); },
          [&](const SpaceForm3& k) { return constant_curvature_riemann(k.rho, 3, x, y, z); },
          [&](const Bcv& k) { return bcv_riemann(k.a, k.b, x, y, z); },
          [&](const RuledSurface&) {
            return constant_curvature_riemann(gaussian_curvature(m, p), 2, x, y, z);
          },
          [&](const ProductWithLine& k) {
            return constant_curvature_riemann(gaussian_curvature(product_base(k), p), 2,
                                              x, y, z);
          }},
      m.kind());
}

void CurveSamples::validate() const {
  if (s.size() != points.size()) {
    throw Error(ErrorCode::kInvalidArgument, "curve grid and point counts differ");
  }
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (!(s[i] > s[i - 1])) {
      throw Error(ErrorCode::kInvalidArgument, "curve grid is not strictly increasing");
    }
  }
}

CurveSamples product_extend(const CurveSamples& curve) {
  if (!curve.manifold.is_surface()) {
    throw Error(ErrorCode::kUnsupported, "product_extend expects a surface curve");
  }
  CurveSamples out = curve;
  out.manifold = ManifoldModel::product_with_line(curve.manifold);
  for (auto& p : out.points) p[2] = 0.0;
  return out;
}

}  // namespace trikurve
