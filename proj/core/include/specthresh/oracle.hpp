#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "specthresh/basis.hpp"
#include "specthresh/chain.hpp"
#include "specthresh/coeff_matrix.hpp"
#include "specthresh/quadrature.hpp"

namespace specthresh {

/// Wrapped OU transition density
///   p(x, y) = sum_i (pi s2 / theta)^{-1/2} exp(-theta (y + L i - x e^{-theta})^2 / s2),
///   s2 = sigma^2 (1 - e^{-2 theta}),
/// with i in [-lattice_halfwidth, lattice_halfwidth]. This is the estimand the
/// loss protocol compares against.
struct WrappedDensity {
  OuParams params;
  int lattice_halfwidth = 10;

  void validate() const;
};

double ou_transition_density(const WrappedDensity& dens, double x, double y);

/// Wrapped N(0, sigma^2 / (2 theta)) density on [0, period).
double ou_invariant_density(const OuParams& params, double x, int lattice_halfwidth = 10);

/// Joint density of a stationary pair (X_i, X_{i+1}) of the wrapped chain produced
/// by simulate_ou: both coordinates of the bivariate Gaussian (Y_i, Y_{i+1}) are
/// wrapped. Its Galerkin coefficients are the ergodic limit of the empirical
/// cross-moment matrix.
double ou_stationary_pair_density(const OuParams& params, double x, double y,
                                  int lattice_halfwidth = 10);

using KernelFn = std::function<double(std::span<const double>, std::span<const double>)>;
using DensityFn = std::function<double(std::span<const double>)>;

/// Galerkin matrices of a transition kernel p and invariant density mu:
///   R = int int Psi_a(x) p(x,y) Psi_b(y) mu(x) dx dy
///   G = int Psi_a Psi_b mu
///   P = int int Psi_a(x) p(x,y) Psi_b(y) dx dy
struct GalerkinMatrices {
  CoeffMatrix R;
  CoeffMatrix G;
  CoeffMatrix P;
};

/// Tensorized quadrature of the three Galerkin matrices. Rejects grids with fewer
/// than 4 m nodes per axis (aliasing of the basis). Cost grows as nodes^(2 dim).
GalerkinMatrices oracle_galerkin(const KernelFn& kernel, const DensityFn& invariant,
                                 const TorusBasis& basis, const QuadratureGrid& grid);

/// Which kernel an OU oracle is built from.
enum class OuKernel {
  /// The wrapped transition formula (mean x e^{-theta} with x already wrapped).
  WrappedTransition,
  /// Conditional law of X_{i+1} given X_i for the wrapped stationary chain,
  /// i.e. ou_stationary_pair_density / ou_invariant_density.
  StationaryPair,
};

/// oracle_galerkin for the d = 1 periodized OU chain on basis `spec`.
GalerkinMatrices ou_oracle(const OuParams& params, const BasisSpec& spec,
                           const QuadratureGrid& grid,
                           OuKernel kernel = OuKernel::WrappedTransition,
                           int lattice_halfwidth = 10);

/// Largest k singular values, decreasing.
std::vector<double> oracle_singular_values(const CoeffMatrix& m, std::size_t k);
std::vector<double> singular_values(const Eigen::MatrixXd& m);

/// Best rank-r Frobenius approximation (truncated SVD).
CoeffMatrix low_rank_truncate(const CoeffMatrix& m, std::size_t r);

/// Least-squares slope of log(values[k]) against k. NaN when fewer than two
/// values or any value is not strictly positive.
double log_decay_slope(std::span<const double> values);

}  // namespace specthresh
