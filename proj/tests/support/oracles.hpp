#pragma once

// Independent reference computations used by the tests. Nothing here calls into
// the code paths it is used to check.

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace ref {

inline constexpr double kPi = std::numbers::pi;

/// Direct transcription of the trigonometric family on [0, 2 pi).
inline double trig(int k, double x) {
  if (k == 0) return 1.0 / std::sqrt(2.0 * kPi);
  if (k % 2 == 0) return std::cos(x * k / 2.0) / std::sqrt(kPi);
  return std::sin(x * (k + 1) / 2.0) / std::sqrt(kPi);
}

/// Kernel sum_{a,b} C(a,b) trig(a,x) trig(b,y), evaluated term by term.
inline double kernel_value(const Eigen::MatrixXd& c, double x, double y) {
  double total = 0.0;
  for (int a = 0; a < c.rows(); ++a)
    for (int b = 0; b < c.cols(); ++b) total += c(a, b) * trig(a, x) * trig(b, y);
  return total;
}

/// Composite midpoint rule on [0, 2 pi)^2; exact for trigonometric polynomials of
/// degree below `nodes`.
inline double torus2_integral(const std::function<double(double, double)>& f, int nodes) {
  const double h = 2.0 * kPi / nodes;
  double total = 0.0;
  for (int i = 0; i < nodes; ++i)
    for (int j = 0; j < nodes; ++j) total += f((i + 0.5) * h, (j + 0.5) * h);
  return total * h * h;
}

/// Minimizer of ||M - S||_F^2 + alpha^2 rank(S) over the SVD truncations S_r of M,
/// found by evaluating the penalized objective for every r.
struct PenaltyOptimum {
  std::size_t rank = 0;
  Eigen::MatrixXd matrix;
  double objective = 0.0;
};

inline PenaltyOptimum brute_force_rank_penalty(const Eigen::MatrixXd& m, double alpha) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  PenaltyOptimum best;
  best.objective = std::numeric_limits<double>::infinity();
  const auto side = m.rows();
  for (Eigen::Index r = 0; r <= side; ++r) {
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(side, side);
    for (Eigen::Index k = 0; k < r; ++k)
      s += svd.singularValues()(k) * svd.matrixU().col(k) * svd.matrixV().col(k).transpose();
    const double objective = (m - s).squaredNorm() + alpha * alpha * static_cast<double>(r);
    if (objective < best.objective) best = {static_cast<std::size_t>(r), s, objective};
  }
  return best;
}

/// Random matrix with iid N(0, scale^2) entries.
inline Eigen::MatrixXd random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols,
                                     double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = normal(rng);
  return m;
}

inline double sample_variance(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(v.size() - 1);
}

/// OLS slope of y on x.
inline double regression_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace ref
