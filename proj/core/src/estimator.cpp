#include "specthresh/estimator.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <string>

#include "specthresh/error.hpp"

namespace specthresh {

namespace {

void check_dimensions(const Trajectory& traj, const TorusBasis& basis) {
  if (traj.dim() != basis.spec().dim)
    throw InvalidArgument("trajectory dimension " + std::to_string(traj.dim()) +
                          " does not match basis dimension " +
                          std::to_string(basis.spec().dim));
  if (std::abs(traj.period() - basis.spec().period) > 1e-12 * basis.spec().period)
    throw InvalidArgument("trajectory period does not match basis period");
}

// Evaluates the basis at consecutive trajectory points into reusable buffers.
class Sweep {
 public:
  Sweep(const Trajectory& traj, const TorusBasis& basis)
      : traj_(traj), basis_(basis),
        scratch_(basis.spec().dim * basis.spec().size_per_axis) {}

  void eval(std::size_t i, Eigen::VectorXd& out) {
    basis_.eval_all(traj_.point(i), std::span<double>(out.data(), static_cast<std::size_t>(out.size())),
                    scratch_);
  }

 private:
  const Trajectory& traj_;
  const TorusBasis& basis_;
  std::vector<double> scratch_;
};

}  // namespace

void EstimatorConfig::validate() const {
  basis.validate();
  require(std::isfinite(alpha) && alpha >= 0.0, "threshold alpha must be non-negative");
  require(gram_rcond > 0.0 && gram_rcond < 1.0, "gram_rcond must lie in (0, 1)");
  require(tau >= 1, "tau must be at least 1");
}

EmpiricalGalerkin accumulate(const Trajectory& traj, const TorusBasis& basis) {
  check_dimensions(traj, basis);
  const auto side = static_cast<Eigen::Index>(basis.size());
  const std::size_t n = traj.transitions();

  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(side, side);
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(side, side);
  Eigen::VectorXd prev(side);
  Eigen::VectorXd cur(side);
  Sweep sweep(traj, basis);

  sweep.eval(0, prev);
  G.selfadjointView<Eigen::Lower>().rankUpdate(prev);
  for (std::size_t i = 1; i <= n; ++i) {
    sweep.eval(i, cur);
    R.noalias() += prev * cur.transpose();
    G.selfadjointView<Eigen::Lower>().rankUpdate(cur);
    prev.swap(cur);
  }
  R /= static_cast<double>(n);
  G = G.selfadjointView<Eigen::Lower>();
  G /= static_cast<double>(n + 1);
  return {CoeffMatrix(std::move(R), basis.spec()), CoeffMatrix(std::move(G), basis.spec())};
}

CoeffMatrix accumulate_R(const Trajectory& traj, const TorusBasis& basis) {
  check_dimensions(traj, basis);
  const auto side = static_cast<Eigen::Index>(basis.size());
  const std::size_t n = traj.transitions();
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(side, side);
  Eigen::VectorXd prev(side);
  Eigen::VectorXd cur(side);
  Sweep sweep(traj, basis);
  sweep.eval(0, prev);
  for (std::size_t i = 1; i <= n; ++i) {
    sweep.eval(i, cur);
    R.noalias() += prev * cur.transpose();
    prev.swap(cur);
  }
  R /= static_cast<double>(n);
  return CoeffMatrix(std::move(R), basis.spec());
}

CoeffMatrix accumulate_R(const Trajectory& traj, const BasisSpec& spec) {
  return accumulate_R(traj, TrigonometricBasis(spec));
}

CoeffMatrix accumulate_G(const Trajectory& traj, const TorusBasis& basis) {
  check_dimensions(traj, basis);
  const auto side = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(side, side);
  Eigen::VectorXd cur(side);
  Sweep sweep(traj, basis);
  for (std::size_t i = 0; i < traj.length(); ++i) {
    sweep.eval(i, cur);
    G.selfadjointView<Eigen::Lower>().rankUpdate(cur);
  }
  G = G.selfadjointView<Eigen::Lower>();
  G /= static_cast<double>(traj.length());
  return CoeffMatrix(std::move(G), basis.spec());
}

CoeffMatrix accumulate_G(const Trajectory& traj, const BasisSpec& spec) {
  return accumulate_G(traj, TrigonometricBasis(spec));
}

ThresholdResult hard_threshold(const CoeffMatrix& m, double alpha) {
  require(std::isfinite(alpha) && alpha >= 0.0, "threshold alpha must be non-negative");
  if (!m.entries.allFinite()) throw NumericalError("cannot threshold a non-finite matrix");

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m.entries, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) throw NumericalError("SVD of the Galerkin matrix failed");
  const Eigen::VectorXd& s = svd.singularValues();
  if (!s.allFinite()) throw NumericalError("SVD produced non-finite singular values");

  ThresholdReport report;
  report.alpha = alpha;
  report.spectrum.assign(s.data(), s.data() + s.size());

  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m.side(), m.side());
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (!(s(k) > alpha)) break;
    Eigen::VectorXd u = svd.matrixU().col(k);
    Eigen::VectorXd v = svd.matrixV().col(k);
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      if (std::abs(u(i)) > 1e-12) {
        if (u(i) < 0.0) {
          u = -u;
          v = -v;
        }
        break;
      }
    }
    out.noalias() += s(k) * u * v.transpose();
    report.kept.push_back({s(k), std::move(u), std::move(v)});
  }
  return {CoeffMatrix(std::move(out), m.basis), std::move(report)};
}

GramCorrection gram_correct(const CoeffMatrix& G, const CoeffMatrix& rt, double rcond) {
  require(rcond > 0.0 && rcond < 1.0, "gram_rcond must lie in (0, 1)");
  require(G.side() == rt.side(), "Gram and Galerkin matrices differ in size");
  const double scale = std::max(1.0, G.entries.cwiseAbs().maxCoeff());
  require((G.entries - G.entries.transpose()).cwiseAbs().maxCoeff() <= 1e-10 * scale,
          "Gram matrix is not symmetric");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(G.entries);
  if (eig.info() != Eigen::Success) throw NumericalError("eigendecomposition of the Gram matrix failed");
  const Eigen::VectorXd& lambda = eig.eigenvalues();  // ascending
  const double largest = lambda(lambda.size() - 1);
  if (!(largest > 0.0)) throw NumericalError("Gram matrix has no positive eigenvalue");

  const double cutoff = rcond * largest;
  Eigen::VectorXd inverse(lambda.size());
  std::size_t discarded = 0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) > cutoff) {
      inverse(i) = 1.0 / lambda(i);
    } else {
      inverse(i) = 0.0;
      ++discarded;
    }
  }
  const Eigen::MatrixXd& V = eig.eigenvectors();
  Eigen::MatrixXd out = V * inverse.asDiagonal() * (V.transpose() * rt.entries);

  GramCorrection result{CoeffMatrix(std::move(out), rt.basis), discarded > 0, discarded,
                        lambda(0), largest};
  return result;
}

Estimate estimate(const Trajectory& traj, const EstimatorConfig& cfg) {
  cfg.validate();
  const TrigonometricBasis basis(cfg.basis);
  return estimate(accumulate(traj, basis), cfg.alpha, cfg.gram_rcond);
}

Estimate estimate(const EmpiricalGalerkin& emp, double alpha, double gram_rcond) {
  ThresholdResult thresholded = hard_threshold(emp.R, alpha);
  GramCorrection gram = gram_correct(emp.G, thresholded.matrix, gram_rcond);
  CoeffMatrix p = gram.matrix;
  return {std::move(p), std::move(thresholded.report), std::move(gram)};
}

double density_from_coeffs(const CoeffMatrix& coeffs, std::span<const double> x,
                           std::span<const double> y) {
  const TrigonometricBasis basis(coeffs.basis);
  const std::vector<double> fx = basis.eval_all(x);
  const std::vector<double> fy = basis.eval_all(y);
  const auto side = static_cast<Eigen::Index>(fx.size());
  const Eigen::Map<const Eigen::VectorXd> u(fx.data(), side);
  const Eigen::Map<const Eigen::VectorXd> v(fy.data(), side);
  return u.dot(coeffs.entries * v);
}

CoeffMatrix power_estimator(const CoeffMatrix& p, unsigned tau) {
  require(tau >= 1, "tau must be at least 1");
  Eigen::MatrixXd result = p.entries;
  Eigen::MatrixXd base = p.entries;
  unsigned remaining = tau - 1;
  while (remaining > 0) {
    if (remaining & 1U) result = (result * base).eval();
    remaining >>= 1U;
    if (remaining > 0) base = (base * base).eval();
  }
  return CoeffMatrix(std::move(result), p.basis);
}

Resolution choose_resolution(std::size_t n, double s, std::size_t d, double C) {
  require(n >= 3, "choose_resolution needs n >= 3");
  require(d >= 1, "dimension must be positive");
  require(std::isfinite(s) && s >= static_cast<double>(d), "smoothness s must satisfy s >= d");
  require(std::isfinite(C) && C > 0.0, "constant C must be positive");
  const double dn = static_cast<double>(n);
  const double dd = static_cast<double>(d);
  const double arg = std::pow(dn, 1.0 / (2.0 * s + dd)) *
                     std::pow(std::log(dn), -dd / (4.0 * s + 2.0 * dd));
  const int level = static_cast<int>(std::ceil(std::log2(arg)));
  const double alpha = C * std::sqrt(std::exp2(static_cast<double>(level) * dd) / dn);
  return {level, alpha};
}

}  // namespace specthresh
