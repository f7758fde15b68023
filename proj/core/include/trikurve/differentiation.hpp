#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace trikurve {

// Finite-difference weights on arbitrary nodes (Fornberg's recursion).
// Row d holds the weights of the d-th derivative at x0, d = 0..max_order.
Eigen::MatrixXd fornberg_weights(double x0, std::span<const double> nodes, int max_order);

struct DifferentiationOptions {
  int accuracy = 8;      // formal order of each first-derivative stencil (even)
  int stride = 0;        // node stride in samples; 0 picks one automatically
  double noise = 1e-14;  // relative noise level assumed for the samples
};

// Derivative operator on a sample grid. Stencils use every stride-th sample
// and are central where the window fits, shifted at the ends otherwise.
class GridDifferentiator {
 public:
  GridDifferentiator(std::span<const double> s, int stride, int accuracy, int order = 1);

  std::vector<double> apply(std::span<const double> f) const;
  std::vector<Eigen::Vector3d> apply(std::span<const Eigen::Vector3d> f) const;

  // True where the stencil at sample i is central.
  const std::vector<bool>& central() const { return central_; }
  // Samples used by the stencil at sample i.
  const std::vector<int>& nodes(std::size_t i) const { return nodes_[i]; }
  int stride() const { return stride_; }
  int order() const { return order_; }

 private:
  int stride_;
  int order_;
  std::vector<std::vector<int>> nodes_;
  std::vector<std::vector<double>> weights_;
  std::vector<bool> central_;
};

// Stride balancing truncation (H^accuracy) against noise amplification
// (noise / H^depth) for depth nested derivatives, on features of size
// length_scale. Capped so that a central nested stencil fits in the grid when
// possible.
int auto_stride(std::span<const double> s, double length_scale, int accuracy, int depth,
                double noise);

// Propagates "all stencils central" through one more nested derivative.
std::vector<bool> nest_interior(const GridDifferentiator& d, const std::vector<bool>& inner);

// Least-squares Chebyshev expansion of vector samples over [s.front(),
// s.back()]. The degree is the lowest of 8, 12, ... whose largest residual
// reaches the rounding floor (64 eps max|f|); if none does, the best one is
// kept and resolved() is false. Useful for differentiating smooth, densely
// sampled data many times.
class ChebyshevFit {
 public:
  static constexpr int kMaxOrder = 6;

  ChebyshevFit(std::span<const double> s, std::span<const Eigen::Vector3d> f, int max_degree = 64);
  // order in 0..kMaxOrder.
  Eigen::Vector3d derivative(double s, int order) const;
  int degree() const { return static_cast<int>(coeffs_[0].rows()) - 1; }
  double residual() const { return residual_; }
  bool resolved() const { return resolved_; }

 private:
  double lo_;
  double hi_;
  double residual_ = 0.0;
  bool resolved_ = false;
  std::vector<Eigen::MatrixXd> coeffs_;  // coeffs_[k]: k-th derivative, one row per degree
};

}  // namespace trikurve
