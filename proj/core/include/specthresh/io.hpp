#pragma once

#include <iosfwd>
#include <string>

#include "specthresh/chain.hpp"
#include "specthresh/coeff_matrix.hpp"
#include "specthresh/estimator.hpp"
#include "specthresh/harness.hpp"

namespace specthresh::io {

/// Shortest decimal form that round-trips a double (17 significant digits max).
std::string format_number(double v);

// Trajectories: '#' comment lines carry period/seed/parameters, then a header row
// x0,x1,... and one row per observation.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
Trajectory read_trajectory_csv(std::istream& is);

// Coefficient matrices: a '#' line with the basis shape, then side rows of side values.
void write_matrix_csv(std::ostream& os, const CoeffMatrix& m);
CoeffMatrix read_matrix_csv(std::istream& is);
std::string matrix_json(const CoeffMatrix& m);

/// {"alpha", "rank", "singular_values", "kept": [{"value", "left", "right"}]} plus
/// optional Gram diagnostics.
std::string report_json(const ThresholdReport& report, const GramCorrection* gram = nullptr);

inline constexpr const char* kLossTableHeader = "n,m,alpha,mean_loss,sd_loss,mean_rank,replications";
void write_loss_table_csv(std::ostream& os, const LossTable& table);
LossTable read_loss_table_csv(std::istream& is);
std::string loss_table_json(const LossTable& table);

/// First row: corner label then x grid; following rows: y value then p(x_i, y).
void write_grid_csv(std::ostream& os, const DensityGrid& grid);
DensityGrid read_grid_csv(std::istream& is);

}  // namespace specthresh::io
