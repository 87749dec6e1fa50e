#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "specthresh/basis.hpp"

namespace specthresh {

enum class QuadratureRule { GaussLegendre, Trapezoid };

/// One-dimensional rule on [0, period), tensorized over axes by the oracle.
struct QuadratureGrid {
  std::size_t nodes_per_axis = 512;
  QuadratureRule rule = QuadratureRule::GaussLegendre;
  double period = kTwoPi;

  void validate() const;
};

struct QuadratureNodes {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre nodes and weights on [-1, 1], ascending.
QuadratureNodes gauss_legendre(std::size_t n);

/// Nodes and weights of grid mapped to [0, period).
QuadratureNodes quadrature_nodes(const QuadratureGrid& grid);

/// Integral over [0, period)^dim of f by the tensorized rule. Summation order is
/// fixed (row-major over node tuples).
double integrate(const std::function<double(std::span<const double>)>& f,
                 std::size_t dim, const QuadratureGrid& grid);

}  // namespace specthresh
