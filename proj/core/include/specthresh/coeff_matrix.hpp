#pragma once

#include <Eigen/Dense>

#include "specthresh/basis.hpp"

namespace specthresh {

/// Dense square matrix of Galerkin coefficients indexed by flat basis indices
/// of `basis`. Side is basis.size(); entries are finite.
struct CoeffMatrix {
  Eigen::MatrixXd entries;
  BasisSpec basis;

  CoeffMatrix() = default;
  CoeffMatrix(Eigen::MatrixXd m, const BasisSpec& spec);

  static CoeffMatrix zero(const BasisSpec& spec);
  static CoeffMatrix identity(const BasisSpec& spec);

  Eigen::Index side() const { return entries.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return entries(i, j); }
};

}  // namespace specthresh
