#pragma once

#include <array>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "trikurve/profile.hpp"

namespace trikurve {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

class ManifoldModel;

// Constant curvature rho in the conformal chart
//   g = (dx^2 + dy^2) / (1 + rho/4 (x^2 + y^2))^2,
// i.e. the (x, y) slice of BCV(rho/4, 0).
struct SpaceForm2 {
  double rho = 0.0;
};

// Constant curvature rho in the conformal chart g = |dx|^2 / (1 + rho/4 |x|^2)^2.
struct SpaceForm3 {
  double rho = 0.0;
};

// Bianchi-Cartan-Vranceanu space M(a, b):
//   g = (dx^2 + dy^2) / L^2 + (dz + b/2 (y dx - x dy) / L)^2,
//   L = 1 + a (x^2 + y^2) > 0.
struct Bcv {
  double a = 0.0;
  double b = 0.0;
};

// Normal ruled surface x(u, v) = alpha(u) + v N(u) over a Frenet directrix.
// In the chart (u, v) the induced metric is diagonal,
//   E = (1 - v kappa(u))^2 + v^2 tau(u)^2,  F = 0,  G = 1,
// so the directrix v = 0 is unit speed with geodesic curvature kappa and the
// Gaussian curvature there is -tau^2.
struct RuledSurface {
  FrenetProfile directrix;
};

// Riemannian product of a surface with a Euclidean line; the line is the
// third chart coordinate and the third frame vector.
struct ProductWithLine {
  std::shared_ptr<const ManifoldModel> base;
};

class ManifoldModel {
 public:
  using Kind =
      std::variant<SpaceForm2, SpaceForm3, Bcv, RuledSurface, ProductWithLine>;

  static ManifoldModel space_form2(double rho);
  static ManifoldModel space_form3(double rho);
  // Rejects 4a = b^2 (a space form, excluded from the BCV classification).
  static ManifoldModel bcv(double a, double b);
  static ManifoldModel bcv_unchecked(double a, double b);
  static ManifoldModel ruled(FrenetProfile directrix);
  // base must be a surface model.
  static ManifoldModel product_with_line(const ManifoldModel& base);

  const Kind& kind() const { return kind_; }
  template <class T>
  const T* as() const {
    return std::get_if<T>(&kind_);
  }

  // 2 for surfaces, 3 otherwise. Surface models use chart points and vectors
  // with a zero third component.
  int dimension() const;
  bool is_surface() const { return dimension() == 2; }
  std::string describe() const;

 private:
  explicit ManifoldModel(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

// Orthonormal frame at a chart point: column i holds E_{i+1} in chart
// components. For surfaces the third column is the formal unit vector e_z.
struct FramePoint {
  Vec3 position;
  Mat3 frame;
};

// gamma[i](k, j) = Gamma^k_{ij} with nabla_{E_i} E_j = sum_k Gamma^k_{ij} E_k.
struct ConnectionCoefficients {
  std::array<Mat3, 3> gamma{Mat3::Zero(), Mat3::Zero(), Mat3::Zero()};

  // Zeroth-order part of nabla_X Y for frame-component vectors X, Y:
  // sum_{i,j} X_i Y_j Gamma^k_{ij}.
  Vec3 apply(const Vec3& x, const Vec3& y) const {
    return x[0] * (gamma[0] * y) + x[1] * (gamma[1] * y) + x[2] * (gamma[2] * y);
  }
  Vec3 nabla(int i, int j) const { return gamma[i].col(j); }
};

struct CurvatureComponents {
  double r1212 = 0.0;
  double r1313 = 0.0;
  double r2323 = 0.0;
};

bool in_chart(const ManifoldModel& m, const Vec3& p);

// Gram matrix of the coordinate vectors; for surfaces the unused slot is 1.
Mat3 metric_at(const ManifoldModel& m, const Vec3& p);
FramePoint frame_at(const ManifoldModel& m, const Vec3& p);

// Chart components <-> orthonormal-frame components at p.
Vec3 to_frame(const ManifoldModel& m, const Vec3& p, const Vec3& chart_vector);
Vec3 to_chart(const ManifoldModel& m, const Vec3& p, const Vec3& frame_vector);

ConnectionCoefficients connection_in_frame(const ManifoldModel& m, const Vec3& p);
CurvatureComponents curvature_components(const ManifoldModel& m);

// R(X, Y) Z for frame-component vectors, with the convention that
// <R(X, Y) Y, X> is the sectional curvature of span{X, Y}.
Vec3 riemann_apply(const ManifoldModel& m, const Vec3& p, const Vec3& x,
                   const Vec3& y, const Vec3& z);

// Gaussian curvature of a surface model at p; throws Unsupported otherwise.
double gaussian_curvature(const ManifoldModel& m, const Vec3& p);

// Arc-length sampled curve in a model chart.
struct CurveSamples {
  std::vector<double> s;
  std::vector<Vec3> points;
  ManifoldModel manifold = ManifoldModel::space_form3(0.0);

  std::size_t size() const { return s.size(); }
  // Throws InvalidArgument on size mismatch or a non-increasing grid.
  void validate() const;
};

// Canonical inclusion of a surface curve into surface x R at height 0.
CurveSamples product_extend(const CurveSamples& curve);

}  // namespace trikurve
