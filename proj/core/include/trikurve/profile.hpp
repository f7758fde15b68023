#pragma once

#include <array>
#include <memory>
#include <vector>

namespace trikurve {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool contains(double s, double slack = 0.0) const {
    return s >= lo - slack && s <= hi + slack;
  }
};

// Curvature with derivatives 0..4 and torsion with derivatives 0..1 at one
// arc-length value. Orders a profile cannot supply are NaN.
struct ProfileJet {
  std::array<double, 5> kappa{};
  std::array<double, 2> tau{};
};

// Curvature/torsion data that determines a Frenet curve up to rigid motion.
//
//  * ConstantPair(kappa0, tau0): a helix.
//  * TheoremExistence(c1, c2): curvature solving 5 k'^2 = c2 - 2 c1 / k + k^4
//    with torsion chosen so the directrix of the normal ruled surface is
//    triharmonic. c1 = c2 = 0 is the closed form k = sqrt(5)/s,
//    t = 3 sqrt(7) / (2 s) on s > 0; other constants are integrated
//    numerically on a finite interval.
//  * Tabulated: uniform grid of (s, kappa, tau) with cubic B-spline
//    interpolation. Only kappa, kappa', kappa'' and tau, tau' are available.
//
// Profiles are immutable and cheap to copy.
class FrenetProfile {
 public:
  enum class Kind { kTabulated, kTheoremExistence, kConstantPair };

  static FrenetProfile constant_pair(double kappa0, double tau0);
  static FrenetProfile theorem_existence();
  // General first-integral branch: kappa(s0) = kappa0 with the sign of
  // kappa'(s0) given by slope_sign, integrated over [s0, s1].
  static FrenetProfile theorem_existence(double c1, double c2, double s0,
                                         double kappa0, double s1,
                                         int slope_sign = -1);
  static FrenetProfile tabulated(std::vector<double> s,
                                 std::vector<double> kappa,
                                 std::vector<double> tau);

  Kind kind() const;
  Interval domain() const;

  double kappa(double s) const;
  double tau(double s) const;
  ProfileJet jet(double s) const;

  // Constants of the defining family (zero where not applicable).
  double kappa0() const;
  double tau0() const;
  double c1() const;
  double c2() const;

  // Raw table for tabulated profiles (empty otherwise).
  const std::vector<double>& table_s() const;
  const std::vector<double>& table_kappa() const;
  const std::vector<double>& table_tau() const;

  struct Impl;

 private:
  explicit FrenetProfile(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

}  // namespace trikurve
