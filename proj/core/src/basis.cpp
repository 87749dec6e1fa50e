#include "specthresh/basis.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "specthresh/coeff_matrix.hpp"
#include "specthresh/error.hpp"

namespace specthresh {

std::size_t BasisSpec::size() const {
  std::size_t total = 1;
  for (std::size_t axis = 0; axis < dim; ++axis) total *= size_per_axis;
  return total;
}

void BasisSpec::validate() const {
  require(dim >= 1, "basis dimension must be positive");
  require(size_per_axis >= 1, "basis size per axis must be positive");
  require(std::isfinite(period) && period > 0.0, "basis period must be positive and finite");
  double total = 1.0;
  for (std::size_t axis = 0; axis < dim; ++axis) total *= static_cast<double>(size_per_axis);
  require(total <= 1e6, "basis size m^d exceeds 1e6");
}

IndexMap::IndexMap(const BasisSpec& spec)
    : dim_(spec.dim), base_(spec.size_per_axis), size_(spec.size()) {
  spec.validate();
}

BasisIndex IndexMap::from_flat(std::size_t flat) const {
  require(flat < size_, "flat index " + std::to_string(flat) + " out of range");
  BasisIndex idx;
  idx.flat = flat;
  idx.per_axis.assign(dim_, 0);
  for (std::size_t axis = dim_; axis-- > 0;) {
    idx.per_axis[axis] = flat % base_;
    flat /= base_;
  }
  return idx;
}

std::size_t IndexMap::to_flat(std::span<const std::size_t> per_axis) const {
  require(per_axis.size() == dim_, "index tuple has wrong dimension");
  std::size_t flat = 0;
  for (std::size_t digit : per_axis) {
    require(digit < base_, "per-axis index out of range");
    flat = flat * base_ + digit;
  }
  return flat;
}

double eval_basis_1d(long k, double x, double period) {
  require(k >= 0, "basis index must be non-negative");
  require(period > 0.0, "period must be positive");
  if (k == 0) return 1.0 / std::sqrt(period);
  const double amplitude = std::sqrt(2.0 / period);
  const double omega = kTwoPi / period;
  if (k % 2 == 0) return amplitude * std::cos(omega * static_cast<double>(k / 2) * x);
  return amplitude * std::sin(omega * static_cast<double>((k + 1) / 2) * x);
}

double eval_basis(const BasisIndex& idx, std::span<const double> point, double period) {
  require(idx.per_axis.size() == point.size(),
          "basis index has dimension " + std::to_string(idx.per_axis.size()) +
              " but point has dimension " + std::to_string(point.size()));
  double value = 1.0;
  for (std::size_t axis = 0; axis < point.size(); ++axis)
    value *= eval_basis_1d(static_cast<long>(idx.per_axis[axis]), point[axis], period);
  return value;
}

TorusBasis::TorusBasis(const BasisSpec& spec) : spec_(spec), index_(spec) {}

void TorusBasis::eval_axis(double x, std::span<double> out) const {
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = eval_1d(k, x);
}

void TorusBasis::eval_all(std::span<const double> point, std::span<double> out,
                          std::span<double> scratch) const {
  const std::size_t d = spec_.dim;
  const std::size_t m = spec_.size_per_axis;
  require(point.size() == d, "point dimension " + std::to_string(point.size()) +
                                 " does not match basis dimension " + std::to_string(d));
  require(out.size() == size(), "output buffer has wrong size");
  if (d == 1) {
    eval_axis(point[0], out);
    return;
  }
  require(scratch.size() >= d * m, "scratch buffer too small");
  for (std::size_t axis = 0; axis < d; ++axis)
    eval_axis(point[axis], scratch.subspan(axis * m, m));

  // Expand the tensor product axis by axis; after step `axis` the first m^(axis+1)
  // entries of out hold the partial products in row-major order.
  for (std::size_t k = 0; k < m; ++k) out[k] = scratch[k];
  std::size_t filled = m;
  for (std::size_t axis = 1; axis < d; ++axis) {
    const auto factors = scratch.subspan(axis * m, m);
    for (std::size_t i = filled; i-- > 0;) {
      const double head = out[i];
      for (std::size_t k = m; k-- > 0;) out[i * m + k] = head * factors[k];
    }
    filled *= m;
  }
}

std::vector<double> TorusBasis::eval_all(std::span<const double> point) const {
  std::vector<double> out(size());
  std::vector<double> scratch(spec_.dim * spec_.size_per_axis);
  eval_all(point, out, scratch);
  return out;
}

double TorusBasis::eval(std::size_t flat, std::span<const double> point) const {
  const BasisIndex idx = index_.from_flat(flat);
  require(point.size() == spec_.dim, "point dimension does not match basis dimension");
  double value = 1.0;
  for (std::size_t axis = 0; axis < spec_.dim; ++axis)
    value *= eval_1d(idx.per_axis[axis], point[axis]);
  return value;
}

TrigonometricBasis::TrigonometricBasis(const BasisSpec& spec)
    : TorusBasis(spec),
      constant_(1.0 / std::sqrt(spec.period)),
      amplitude_(std::sqrt(2.0 / spec.period)),
      frequency_(kTwoPi / spec.period) {}

double TrigonometricBasis::eval_1d(std::size_t k, double x) const {
  if (k == 0) return constant_;
  if (k % 2 == 0) return amplitude_ * std::cos(frequency_ * static_cast<double>(k / 2) * x);
  return amplitude_ * std::sin(frequency_ * static_cast<double>((k + 1) / 2) * x);
}

void TrigonometricBasis::eval_axis(double x, std::span<double> out) const {
  if (out.empty()) return;
  out[0] = constant_;
  // Harmonic h fills slots 2h-1 (sin) and 2h (cos).
  for (std::size_t h = 1; 2 * h - 1 < out.size(); ++h) {
    const double angle = frequency_ * static_cast<double>(h) * x;
    out[2 * h - 1] = amplitude_ * std::sin(angle);
    if (2 * h < out.size()) out[2 * h] = amplitude_ * std::cos(angle);
  }
}

CoeffMatrix::CoeffMatrix(Eigen::MatrixXd m, const BasisSpec& spec)
    : entries(std::move(m)), basis(spec) {
  spec.validate();
  const auto side = static_cast<Eigen::Index>(spec.size());
  require(entries.rows() == side && entries.cols() == side,
          "coefficient matrix is " + std::to_string(entries.rows()) + "x" +
              std::to_string(entries.cols()) + " but basis has " + std::to_string(side) +
              " functions");
  if (!entries.allFinite()) throw NumericalError("coefficient matrix has non-finite entries");
}

CoeffMatrix CoeffMatrix::zero(const BasisSpec& spec) {
  const auto side = static_cast<Eigen::Index>(spec.size());
  return CoeffMatrix(Eigen::MatrixXd::Zero(side, side), spec);
}

CoeffMatrix CoeffMatrix::identity(const BasisSpec& spec) {
  const auto side = static_cast<Eigen::Index>(spec.size());
  return CoeffMatrix(Eigen::MatrixXd::Identity(side, side), spec);
}

}  // namespace specthresh
