#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "specthresh/chain.hpp"
#include "specthresh/coeff_matrix.hpp"
#include "specthresh/quadrature.hpp"

namespace specthresh {

/// One (basis size, threshold) parameter row of a loss table.
struct ParameterRow {
  std::size_t m = 0;
  double alpha = 0.0;

  friend bool operator==(const ParameterRow&, const ParameterRow&) = default;
};

struct CellSpec {
  std::size_t n = 0;
  std::size_t m = 0;
  double alpha = 0.0;

  friend bool operator==(const CellSpec&, const CellSpec&) = default;
};

struct ExperimentConfig {
  OuParams params;
  std::vector<std::size_t> n_values;
  /// Cartesian grid m_values x alpha_values, used when `rows` is empty.
  std::vector<std::size_t> m_values;
  std::vector<double> alpha_values;
  /// Explicit (m, alpha) rows; overrides the Cartesian grid when non-empty.
  std::vector<ParameterRow> rows;
  std::size_t replications = 100;
  std::uint64_t master_seed = 20240101;
  std::size_t truth_block = 30;
  InitMode init = StationaryStart{};
  QuadratureGrid quadrature{};
  int lattice_halfwidth = 10;
  double gram_rcond = 1e-10;
  /// Worker threads; 0 means hardware concurrency. Results do not depend on it.
  unsigned threads = 1;

  void validate() const;
  std::vector<ParameterRow> parameter_rows() const;
  /// Cells in output order: parameter rows outermost, then n_values.
  std::vector<CellSpec> cells() const;
};

struct CellStats {
  CellSpec cell;
  double mean_loss = 0.0;
  double sd_loss = 0.0;
  double mean_rank = 0.0;
  std::size_t replications = 0;
  std::vector<double> losses;
  std::vector<std::size_t> ranks;
};

struct LossTable {
  std::vector<CellStats> cells;

  const CellStats* find(std::size_t n, std::size_t m, double alpha) const;
};

/// Seed of replication `rep` at sample size n. All (m, alpha) rows evaluated at the
/// same n reuse the same chains.
std::uint64_t replication_seed(std::uint64_t master_seed, std::size_t n, std::size_t rep);

/// Lebesgue coefficients of the wrapped OU transition density on the first
/// truth_block basis functions per axis.
CoeffMatrix truth_coefficients(const ExperimentConfig& cfg);

/// Frobenius distance between estimate (zero-padded into the truth index space)
/// and truth. Throws if the estimate has more functions per axis than truth.
double euclidean_loss(const CoeffMatrix& estimate, const CoeffMatrix& truth);

CellStats run_cell(const ExperimentConfig& cfg, const CoeffMatrix& truth, std::size_t n,
                   std::size_t m, double alpha);
CellStats run_cell(const ExperimentConfig& cfg, std::size_t n, std::size_t m, double alpha);

LossTable run_table(const ExperimentConfig& cfg, const CoeffMatrix& truth);
LossTable run_table(const ExperimentConfig& cfg);

/// Histogram rank -> number of replications.
std::map<std::size_t, std::size_t> rank_diagnostic(const ExperimentConfig& cfg, std::size_t n,
                                                   std::size_t m, double alpha);

/// Equispaced samples on [0, period)^2; values(j, i) = p(x_i, y_j).
struct DensityGrid {
  std::vector<double> x;
  std::vector<double> y;
  Eigen::MatrixXd values;
};

DensityGrid density_grid(const CoeffMatrix& coeffs, std::size_t resolution);
DensityGrid density_grid(const std::function<double(double, double)>& p,
                         std::size_t resolution, double period = kTwoPi);
double grid_distance(const DensityGrid& a, const DensityGrid& b);

/// Settings for the four-panel transition density comparison.
struct FigureConfig {
  OuParams params;
  std::size_t n = 1000;
  InitMode init = FixedStart{0.5};
  std::uint64_t seed = 1;
  std::size_t resolution = 128;
  std::size_t projected_m = 4;
  ParameterRow plain{3, 0.0};
  ParameterRow thresholded{4, 0.2};
  QuadratureGrid quadrature{};
  int lattice_halfwidth = 10;
  double gram_rcond = 1e-10;
};

struct FigurePanels {
  DensityGrid truth;
  DensityGrid projected;
  DensityGrid plain;
  DensityGrid thresholded;
};

FigurePanels figure_panels(const FigureConfig& cfg);

/// The loss-table grid: n in {1000, 3000, 6000}, sixteen (m, alpha) rows, 100
/// stationary replications at theta = sigma = 2.
ExperimentConfig table1_config();

}  // namespace specthresh
