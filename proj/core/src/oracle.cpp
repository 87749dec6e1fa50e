#include "specthresh/oracle.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "specthresh/error.hpp"

namespace specthresh {

namespace {

// exp() underflows to zero below this; lattice terms past it contribute nothing.
constexpr double kNegligibleExponent = -745.0;

double normal_pdf(double z, double variance) {
  return std::exp(-0.5 * z * z / variance) / std::sqrt(2.0 * std::numbers::pi * variance);
}

struct TensorGrid {
  std::vector<double> points;  // row-major, count x dim
  std::vector<double> weights;
  std::size_t dim = 1;

  std::size_t count() const { return weights.size(); }
  std::span<const double> point(std::size_t i) const { return {points.data() + i * dim, dim}; }
};

TensorGrid tensor_grid(const QuadratureGrid& grid, std::size_t dim) {
  const QuadratureNodes q = quadrature_nodes(grid);
  const std::size_t n = q.nodes.size();
  std::size_t count = 1;
  for (std::size_t axis = 0; axis < dim; ++axis) count *= n;
  TensorGrid t;
  t.dim = dim;
  t.points.resize(count * dim);
  t.weights.resize(count);
  for (std::size_t flat = 0; flat < count; ++flat) {
    std::size_t rest = flat;
    double w = 1.0;
    for (std::size_t axis = dim; axis-- > 0;) {
      const std::size_t digit = rest % n;
      rest /= n;
      t.points[flat * dim + axis] = q.nodes[digit];
      w *= q.weights[digit];
    }
    t.weights[flat] = w;
  }
  return t;
}

}  // namespace

void WrappedDensity::validate() const {
  params.validate();
  require(params.sigma > 0.0, "transition density needs sigma > 0");
  require(lattice_halfwidth >= 1, "lattice halfwidth must be at least 1");
}

double ou_transition_density(const WrappedDensity& dens, double x, double y) {
  const OuParams& p = dens.params;
  const double spread = p.sigma * p.sigma * (-std::expm1(-2.0 * p.theta));
  const double norm = 1.0 / std::sqrt(std::numbers::pi * spread / p.theta);
  const double mean = x * p.decay();
  double total = 0.0;
  for (int i = -dens.lattice_halfwidth; i <= dens.lattice_halfwidth; ++i) {
    const double z = y + p.period * static_cast<double>(i) - mean;
    total += norm * std::exp(-p.theta * z * z / spread);
  }
  return total;
}

double ou_invariant_density(const OuParams& params, double x, int lattice_halfwidth) {
  require(params.sigma > 0.0, "invariant density needs sigma > 0");
  const double variance = params.stationary_variance();
  double total = 0.0;
  for (int i = -lattice_halfwidth; i <= lattice_halfwidth; ++i)
    total += normal_pdf(x + params.period * static_cast<double>(i), variance);
  return total;
}

double ou_stationary_pair_density(const OuParams& params, double x, double y,
                                  int lattice_halfwidth) {
  require(params.sigma > 0.0, "pair density needs sigma > 0");
  const double v0 = params.stationary_variance();
  const double v1 = params.step_variance();
  const double a = params.decay();
  const double norm = 1.0 / (2.0 * std::numbers::pi * std::sqrt(v0 * v1));
  double total = 0.0;
  for (int j = -lattice_halfwidth; j <= lattice_halfwidth; ++j) {
    const double xu = x + params.period * static_cast<double>(j);
    const double outer_exponent = -0.5 * xu * xu / v0;
    if (outer_exponent < kNegligibleExponent) continue;
    double inner = 0.0;
    for (int k = -lattice_halfwidth; k <= lattice_halfwidth; ++k) {
      const double z = y + params.period * static_cast<double>(k) - xu * a;
      const double exponent = outer_exponent - 0.5 * z * z / v1;
      if (exponent > kNegligibleExponent) inner += std::exp(exponent);
    }
    total += inner;
  }
  return norm * total;
}

GalerkinMatrices oracle_galerkin(const KernelFn& kernel, const DensityFn& invariant,
                                 const TorusBasis& basis, const QuadratureGrid& grid) {
  const BasisSpec& spec = basis.spec();
  grid.validate();
  require(std::abs(grid.period - spec.period) <= 1e-12 * spec.period,
          "quadrature period does not match basis period");
  if (grid.nodes_per_axis < 4 * spec.size_per_axis)
    throw InvalidArgument("quadrature grid of " + std::to_string(grid.nodes_per_axis) +
                          " nodes aliases a basis of " + std::to_string(spec.size_per_axis) +
                          " functions per axis (need at least 4m)");

  const TensorGrid t = tensor_grid(grid, spec.dim);
  const auto npts = static_cast<Eigen::Index>(t.count());
  const auto side = static_cast<Eigen::Index>(spec.size());

  // A(:, i) = w_i Psi(z_i); B = K A^T, built one kernel row at a time.
  Eigen::MatrixXd phi(side, npts);
  Eigen::VectorXd mu(npts);
  {
    std::vector<double> scratch(spec.dim * spec.size_per_axis);
    for (Eigen::Index i = 0; i < npts; ++i) {
      const auto z = t.point(static_cast<std::size_t>(i));
      basis.eval_all(z, std::span<double>(phi.col(i).data(), static_cast<std::size_t>(side)),
                     scratch);
      mu(i) = invariant(z);
    }
  }
  const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(t.weights.data(), npts);
  const Eigen::MatrixXd weighted = phi * w.asDiagonal();

  Eigen::MatrixXd kernel_times_basis(npts, side);
  Eigen::RowVectorXd row(npts);
  for (Eigen::Index i = 0; i < npts; ++i) {
    const auto x = t.point(static_cast<std::size_t>(i));
    for (Eigen::Index j = 0; j < npts; ++j) row(j) = kernel(x, t.point(static_cast<std::size_t>(j)));
    kernel_times_basis.row(i) = row * weighted.transpose();
  }

  Eigen::MatrixXd P = weighted * kernel_times_basis;
  Eigen::MatrixXd R = weighted * mu.asDiagonal() * kernel_times_basis;
  Eigen::MatrixXd G = weighted * mu.asDiagonal() * phi.transpose();
  G = 0.5 * (G + G.transpose()).eval();
  return {CoeffMatrix(std::move(R), spec), CoeffMatrix(std::move(G), spec),
          CoeffMatrix(std::move(P), spec)};
}

GalerkinMatrices ou_oracle(const OuParams& params, const BasisSpec& spec,
                           const QuadratureGrid& grid, OuKernel kernel, int lattice_halfwidth) {
  require(spec.dim == 1, "the OU oracle is one-dimensional");
  const WrappedDensity dens{params, lattice_halfwidth};
  dens.validate();
  const TrigonometricBasis basis(spec);
  const DensityFn invariant = [&](std::span<const double> x) {
    return ou_invariant_density(params, x[0], lattice_halfwidth);
  };
  KernelFn k;
  if (kernel == OuKernel::WrappedTransition) {
    k = [&](std::span<const double> x, std::span<const double> y) {
      return ou_transition_density(dens, x[0], y[0]);
    };
  } else {
    k = [&](std::span<const double> x, std::span<const double> y) {
      return ou_stationary_pair_density(params, x[0], y[0], lattice_halfwidth) /
             ou_invariant_density(params, x[0], lattice_halfwidth);
    };
  }
  return oracle_galerkin(k, invariant, basis, grid);
}

std::vector<double> singular_values(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  if (svd.info() != Eigen::Success) throw NumericalError("SVD did not converge");
  const Eigen::VectorXd& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

std::vector<double> oracle_singular_values(const CoeffMatrix& m, std::size_t k) {
  require(k <= static_cast<std::size_t>(m.side()), "requested more singular values than the matrix side");
  auto s = singular_values(m.entries);
  s.resize(k);
  return s;
}

CoeffMatrix low_rank_truncate(const CoeffMatrix& m, std::size_t r) {
  require(r <= static_cast<std::size_t>(m.side()), "truncation rank exceeds matrix side");
  if (r == 0) return CoeffMatrix::zero(m.basis);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m.entries, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) throw NumericalError("SVD did not converge");
  const auto rr = static_cast<Eigen::Index>(r);
  Eigen::MatrixXd out = svd.matrixU().leftCols(rr) *
                        svd.singularValues().head(rr).asDiagonal() *
                        svd.matrixV().leftCols(rr).transpose();
  return CoeffMatrix(std::move(out), m.basis);
}

double log_decay_slope(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  double mean_k = 0.0;
  double mean_log = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (!(values[k] > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    mean_k += static_cast<double>(k);
    mean_log += std::log(values[k]);
  }
  mean_k /= static_cast<double>(n);
  mean_log /= static_cast<double>(n);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double dk = static_cast<double>(k) - mean_k;
    sxy += dk * (std::log(values[k]) - mean_log);
    sxx += dk * dk;
  }
  return sxy / sxx;
}

}  // namespace specthresh
