#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "specthresh/basis.hpp"
#include "specthresh/chain.hpp"
#include "specthresh/coeff_matrix.hpp"

namespace specthresh {

struct SingularTriple {
  double value = 0.0;
  Eigen::VectorXd left;
  Eigen::VectorXd right;
};

/// Outcome of spectral hard thresholding at level alpha. `kept` holds the triples
/// with value > alpha in decreasing order; `spectrum` holds every singular value of
/// the thresholded input.
struct ThresholdReport {
  double alpha = 0.0;
  std::vector<SingularTriple> kept;
  std::vector<double> spectrum;

  std::size_t rank() const { return kept.size(); }
};

struct ThresholdResult {
  CoeffMatrix matrix;
  ThresholdReport report;
};

struct EstimatorConfig {
  BasisSpec basis;
  double alpha = 0.0;
  double gram_rcond = 1e-10;
  unsigned tau = 1;

  void validate() const;
};

/// Result of applying the pseudo-inverse of the Gram matrix.
struct GramCorrection {
  CoeffMatrix matrix;
  /// True when some eigenvalue of G fell below rcond * (largest eigenvalue) and was
  /// dropped from the pseudo-inverse.
  bool ill_conditioned = false;
  std::size_t discarded = 0;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
};

struct EmpiricalGalerkin {
  CoeffMatrix R;
  CoeffMatrix G;
};

struct Estimate {
  CoeffMatrix p_tilde;
  ThresholdReport report;
  GramCorrection gram;
};

/// (1/n) sum_{i<n} Psi(X_i) Psi(X_{i+1})^T in one pass.
CoeffMatrix accumulate_R(const Trajectory& traj, const TorusBasis& basis);
CoeffMatrix accumulate_R(const Trajectory& traj, const BasisSpec& spec);

/// (1/(n+1)) sum_{i<=n} Psi(X_i) Psi(X_i)^T in one pass.
CoeffMatrix accumulate_G(const Trajectory& traj, const TorusBasis& basis);
CoeffMatrix accumulate_G(const Trajectory& traj, const BasisSpec& spec);

/// Both matrices from a single sweep over the trajectory.
EmpiricalGalerkin accumulate(const Trajectory& traj, const TorusBasis& basis);

/// Keeps the singular triples of m with value strictly greater than alpha.
/// Singular vectors are sign-normalized: the first component of each left vector
/// whose magnitude exceeds 1e-12 is positive.
ThresholdResult hard_threshold(const CoeffMatrix& m, double alpha);

/// Applies the pseudo-inverse of symmetric G (relative eigenvalue cutoff rcond) to rt.
GramCorrection gram_correct(const CoeffMatrix& G, const CoeffMatrix& rt, double rcond = 1e-10);

/// accumulate -> hard_threshold(R) -> gram_correct.
Estimate estimate(const Trajectory& traj, const EstimatorConfig& cfg);
/// hard_threshold(R) -> gram_correct on already accumulated matrices.
Estimate estimate(const EmpiricalGalerkin& emp, double alpha, double gram_rcond = 1e-10);

/// p(x, y) = Psi(x)^T P Psi(y) for the trigonometric basis of coeffs.basis.
double density_from_coeffs(const CoeffMatrix& coeffs, std::span<const double> x,
                           std::span<const double> y);

/// Matrix power P^tau, tau >= 1.
CoeffMatrix power_estimator(const CoeffMatrix& p, unsigned tau);

struct Resolution {
  int level = 0;
  double alpha = 0.0;
};

/// level = ceil(log2(n^{1/(2s+d)} log(n)^{-d/(4s+2d)})), alpha = C sqrt(2^{level d} / n).
Resolution choose_resolution(std::size_t n, double s, std::size_t d, double C = 1.0);

}  // namespace specthresh
