#include "trikurve/differentiation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "trikurve/error.hpp"

namespace trikurve {

Eigen::MatrixXd fornberg_weights(double x0, std::span<const double> x, int m) {
  const int n = static_cast<int>(x.size()) - 1;
  if (n < 0 || m < 0) throw Error(ErrorCode::kInvalidArgument, "fornberg_weights: no nodes");
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(m + 1, n + 1);
  double c1 = 1.0;
  double c4 = x[0] - x0;
  c(0, 0) = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          c(k, i) = c1 * (k * c(k - 1, i - 1) - c5 * c(k, i - 1)) / c2;
        }
        c(0, i) = -c1 * c5 * c(0, i - 1) / c2;
      }
      for (int k = mn; k >= 1; --k) {
        c(k, j) = (c4 * c(k, j) - k * c(k - 1, j)) / c3;
      }
      c(0, j) = c4 * c(0, j) / c3;
    }
    c1 = c2;
  }
  return c;
}

GridDifferentiator::GridDifferentiator(std::span<const double> s, int stride, int accuracy,
                                       int order)
    : stride_(std::max(stride, 1)), order_(order) {
  const int n = static_cast<int>(s.size());
  if (accuracy < 2 || accuracy % 2 != 0 || order < 1) {
    throw Error(ErrorCode::kInvalidArgument, "GridDifferentiator: accuracy must be even >= 2");
  }
  // accuracy + order nodes, rounded up to an odd count so central windows
  // are symmetric.
  int width = accuracy + order;
  if (width % 2 == 0) ++width;
  if (n < width) {
    throw Error(ErrorCode::kTooFewSamples, "too few samples for the requested stencil");
  }
  while (stride_ > 1 && (width - 1) * stride_ >= n) --stride_;
  const int half = width / 2;
  nodes_.resize(n);
  weights_.resize(n);
  central_.assign(n, false);
  std::vector<double> xs(width);
  for (int i = 0; i < n; ++i) {
    // Leftmost offset j0 so that the window i + st*(j0 .. j0+width-1) stays
    // inside the grid, as close to central as possible.
    int st = stride_;
    int lo = -(i / st);
    int hi = (n - 1 - i) / st - (width - 1);
    if (lo > hi) {
      st = 1;
      lo = -i;
      hi = n - 1 - i - (width - 1);
    }
    const int j0 = std::clamp(-half, lo, hi);
    central_[i] = (st == stride_ && j0 == -half);
    auto& nd = nodes_[i];
    nd.resize(width);
    for (int k = 0; k < width; ++k) {
      nd[k] = i + st * (j0 + k);
      xs[k] = s[nd[k]];
    }
    const Eigen::MatrixXd w = fornberg_weights(s[i], xs, order);
    weights_[i].resize(width);
    for (int k = 0; k < width; ++k) weights_[i][k] = w(order, k);
  }
}

std::vector<double> GridDifferentiator::apply(std::span<const double> f) const {
  if (f.size() != nodes_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "GridDifferentiator: size mismatch");
  }
  std::vector<double> out(f.size(), 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < nodes_[i].size(); ++k) acc += weights_[i][k] * f[nodes_[i][k]];
    out[i] = acc;
  }
  return out;
}

std::vector<Eigen::Vector3d> GridDifferentiator::apply(
    std::span<const Eigen::Vector3d> f) const {
  if (f.size() != nodes_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "GridDifferentiator: size mismatch");
  }
  std::vector<Eigen::Vector3d> out(f.size(), Eigen::Vector3d::Zero());
  for (std::size_t i = 0; i < f.size(); ++i) {
    Eigen::Vector3d acc = Eigen::Vector3d::Zero();
    for (std::size_t k = 0; k < nodes_[i].size(); ++k) acc += weights_[i][k] * f[nodes_[i][k]];
    out[i] = acc;
  }
  return out;
}

int auto_stride(std::span<const double> s, double length_scale, int accuracy, int depth,
                double noise) {
  const std::size_t n = s.size();
  if (n < 2) return 1;
  const double h = (s.back() - s.front()) / static_cast<double>(n - 1);
  const double target =
      length_scale * std::pow(std::max(noise, 1e-300), 1.0 / (accuracy + depth));
  int stride = std::max(1, static_cast<int>(std::lround(target / h)));
  int width = accuracy + 1;
  // Keep room for one fully central nested stencil plus a margin.
  const long reach = static_cast<long>(depth) * (width - 1);
  const long cap = std::max<long>(1, static_cast<long>(n - 1) / (reach + 2));
  return static_cast<int>(std::min<long>(stride, cap));
}

std::vector<bool> nest_interior(const GridDifferentiator& d, const std::vector<bool>& inner) {
  std::vector<bool> out(inner.size(), false);
  for (std::size_t i = 0; i < inner.size(); ++i) {
    if (!d.central()[i]) continue;
    bool ok = true;
    for (int j : d.nodes(i)) ok = ok && inner[j];
    out[i] = ok;
  }
  return out;
}


namespace {

Eigen::MatrixXd chebyshev_basis(std::span<const double> s, double lo, double hi, int degree) {
  Eigen::MatrixXd a(static_cast<Eigen::Index>(s.size()), degree + 1);
  for (std::size_t r = 0; r < s.size(); ++r) {
    const double x = (2.0 * s[r] - lo - hi) / (hi - lo);
    const auto i = static_cast<Eigen::Index>(r);
    a(i, 0) = 1.0;
    if (degree > 0) a(i, 1) = x;
    for (int k = 2; k <= degree; ++k) a(i, k) = 2.0 * x * a(i, k - 1) - a(i, k - 2);
  }
  return a;
}

// Coefficients of d/ds of a Chebyshev series on [lo, hi].
Eigen::MatrixXd chebyshev_derivative(const Eigen::MatrixXd& a, double lo, double hi) {
  const Eigen::Index n = a.rows() - 1;
  if (n == 0) return Eigen::MatrixXd::Zero(1, a.cols());
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, a.cols());
  for (Eigen::Index k = n - 1; k >= 0; --k) {
    b.row(k) = 2.0 * static_cast<double>(k + 1) * a.row(k + 1);
    if (k + 2 <= n - 1) b.row(k) += b.row(k + 2);
  }
  b.row(0) *= 0.5;
  return b * (2.0 / (hi - lo));
}

}  // namespace

ChebyshevFit::ChebyshevFit(std::span<const double> s, std::span<const Eigen::Vector3d> f,
                           int max_degree)
    : lo_(s.empty() ? 0.0 : s.front()), hi_(s.empty() ? 0.0 : s.back()) {
  if (s.size() != f.size() || s.size() < 12 || !(hi_ > lo_)) {
    throw Error(ErrorCode::kTooFewSamples, "ChebyshevFit needs at least 12 ordered samples");
  }
  const auto n = static_cast<Eigen::Index>(s.size());
  Eigen::MatrixXd y(n, 3);
  double scale = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    y.row(i) = f[static_cast<std::size_t>(i)].transpose();
    scale = std::max(scale, y.row(i).cwiseAbs().maxCoeff());
  }
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::max(scale, 1e-300);
  const int top = std::max(8, std::min(max_degree, static_cast<int>(s.size()) / 4));
  Eigen::MatrixXd best;
  double best_res = std::numeric_limits<double>::infinity();
  for (int deg = 8; deg <= top; deg += 4) {
    const Eigen::MatrixXd a = chebyshev_basis(s, lo_, hi_, deg);
    const Eigen::MatrixXd c = a.colPivHouseholderQr().solve(y);
    const double res = (a * c - y).cwiseAbs().maxCoeff();
    if (res < best_res) {
      best_res = res;
      best = c;
    }
    if (res <= floor) {
      resolved_ = true;
      break;
    }
  }
  residual_ = best_res;
  coeffs_.push_back(best);
  for (int k = 1; k <= kMaxOrder; ++k) coeffs_.push_back(chebyshev_derivative(coeffs_.back(), lo_, hi_));
}

Eigen::Vector3d ChebyshevFit::derivative(double s, int order) const {
  if (order < 0 || order > kMaxOrder) {
    throw Error(ErrorCode::kInvalidArgument, "ChebyshevFit derivative order out of range");
  }
  const Eigen::MatrixXd& a = coeffs_[static_cast<std::size_t>(order)];
  const double x = (2.0 * s - lo_ - hi_) / (hi_ - lo_);
  Eigen::RowVector3d b1 = Eigen::RowVector3d::Zero();
  Eigen::RowVector3d b2 = Eigen::RowVector3d::Zero();
  for (Eigen::Index k = a.rows() - 1; k >= 1; --k) {
    const Eigen::RowVector3d b0 = 2.0 * x * b1 - b2 + a.row(k);
    b2 = b1;
    b1 = b0;
  }
  return (x * b1 - b2 + a.row(0)).transpose();
}

}  // namespace trikurve
