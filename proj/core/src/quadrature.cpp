#include "specthresh/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "specthresh/error.hpp"

namespace specthresh {

void QuadratureGrid::validate() const {
  require(nodes_per_axis >= 2, "quadrature needs at least two nodes per axis");
  require(std::isfinite(period) && period > 0.0, "quadrature period must be positive");
}

QuadratureNodes gauss_legendre(std::size_t n) {
  require(n >= 1, "Gauss-Legendre order must be positive");
  QuadratureNodes q;
  q.nodes.assign(n, 0.0);
  q.weights.assign(n, 0.0);
  const double dn = static_cast<double>(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    // Tricomi initial guess for the i-th largest root, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (dn + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double dk = static_cast<double>(k);
        const double p2 = ((2.0 * dk - 1.0) * x * p1 - (dk - 1.0) * p0) / dk;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      // P_n'(x) from the three-term relation.
      dp = dn * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / dp;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    if (n == 1) {
      x = 0.0;
      dp = 1.0;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    q.nodes[n - 1 - i] = x;
    q.nodes[i] = -x;
    q.weights[i] = w;
    q.weights[n - 1 - i] = w;
  }
  return q;
}

QuadratureNodes quadrature_nodes(const QuadratureGrid& grid) {
  grid.validate();
  const std::size_t n = grid.nodes_per_axis;
  QuadratureNodes q;
  if (grid.rule == QuadratureRule::GaussLegendre) {
    q = gauss_legendre(n);
    const double half = 0.5 * grid.period;
    for (std::size_t i = 0; i < n; ++i) {
      q.nodes[i] = half * (q.nodes[i] + 1.0);
      q.weights[i] *= half;
    }
  } else {
    const double h = grid.period / static_cast<double>(n);
    q.nodes.resize(n);
    q.weights.assign(n, h);
    for (std::size_t i = 0; i < n; ++i) q.nodes[i] = h * static_cast<double>(i);
  }
  return q;
}

double integrate(const std::function<double(std::span<const double>)>& f, std::size_t dim,
                 const QuadratureGrid& grid) {
  require(dim >= 1, "integration dimension must be positive");
  const QuadratureNodes q = quadrature_nodes(grid);
  const std::size_t n = q.nodes.size();
  std::vector<std::size_t> digits(dim, 0);
  std::vector<double> point(dim, q.nodes[0]);
  double total = 0.0;
  while (true) {
    double w = 1.0;
    for (std::size_t axis = 0; axis < dim; ++axis) {
      point[axis] = q.nodes[digits[axis]];
      w *= q.weights[digits[axis]];
    }
    total += w * f(point);
    std::size_t axis = dim;
    while (axis > 0) {
      --axis;
      if (++digits[axis] < n) break;
      digits[axis] = 0;
      if (axis == 0) return total;
    }
  }
}

}  // namespace specthresh
