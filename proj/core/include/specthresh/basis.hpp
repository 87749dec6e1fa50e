#pragma once

#include <cstddef>
#include <memory>
#include <numbers>
#include <span>
#include <vector>

namespace specthresh {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Shape of a tensor basis on the torus [0, period)^dim with size_per_axis
/// functions along every axis.
struct BasisSpec {
  std::size_t dim = 1;
  std::size_t size_per_axis = 1;
  double period = kTwoPi;

  /// m^d, the number of tensor basis functions.
  std::size_t size() const;
  void validate() const;

  friend bool operator==(const BasisSpec&, const BasisSpec&) = default;
};

struct BasisIndex {
  std::size_t flat = 0;
  std::vector<std::size_t> per_axis;
};

/// Row-major bijection between flat indices and per-axis digit tuples. The
/// first axis is the most significant digit.
class IndexMap {
 public:
  explicit IndexMap(const BasisSpec& spec);

  std::size_t size() const { return size_; }
  std::size_t dim() const { return dim_; }
  std::size_t base() const { return base_; }

  BasisIndex from_flat(std::size_t flat) const;
  std::size_t to_flat(std::span<const std::size_t> per_axis) const;

 private:
  std::size_t dim_;
  std::size_t base_;
  std::size_t size_;
};

/// Trigonometric family orthonormal on [0, period):
///   k = 0       -> 1/sqrt(L)
///   k even      -> sqrt(2/L) cos(2 pi (k/2) x / L)
///   k odd       -> sqrt(2/L) sin(2 pi ((k+1)/2) x / L)
/// With L = 2 pi this is 1/sqrt(2 pi), cos(xk/2)/sqrt(pi), sin(x(k+1)/2)/sqrt(pi).
/// Throws InvalidArgument for negative k.
double eval_basis_1d(long k, double x, double period = kTwoPi);

/// Tensor product of eval_basis_1d over the axes of idx.
double eval_basis(const BasisIndex& idx, std::span<const double> point,
                  double period = kTwoPi);

/// Orthonormal basis of L^2 on the torus, evaluated as a tensor product of a
/// one-dimensional family. Implementations other than the trigonometric one
/// (periodized wavelets, B-splines) plug in here.
class TorusBasis {
 public:
  explicit TorusBasis(const BasisSpec& spec);
  virtual ~TorusBasis() = default;

  const BasisSpec& spec() const { return spec_; }
  std::size_t size() const { return spec_.size(); }

  virtual double eval_1d(std::size_t k, double x) const = 0;

  /// Writes Psi_lambda(point) for every flat lambda into out (size m^d).
  /// scratch must hold at least dim * size_per_axis values.
  void eval_all(std::span<const double> point, std::span<double> out,
                std::span<double> scratch) const;
  std::vector<double> eval_all(std::span<const double> point) const;

  double eval(std::size_t flat, std::span<const double> point) const;

 protected:
  virtual void eval_axis(double x, std::span<double> out) const;

 private:
  BasisSpec spec_;
  IndexMap index_;
};

class TrigonometricBasis final : public TorusBasis {
 public:
  explicit TrigonometricBasis(const BasisSpec& spec);

  double eval_1d(std::size_t k, double x) const override;

 protected:
  void eval_axis(double x, std::span<double> out) const override;

 private:
  double constant_;
  double amplitude_;
  double frequency_;
};

}  // namespace specthresh
