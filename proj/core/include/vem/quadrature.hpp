#pragma once

#include <Eigen/Dense>
#include <vector>

#include "vem/geometry.hpp"
#include "vem/polynomial.hpp"

namespace vem {

/// Nodes (global coordinates) and positive weights of a cell rule, exact for
/// polynomials up to `degree`.
struct QuadratureRule {
  std::vector<Vec2> points;
  Eigen::VectorXd weights;
  int degree = 0;

  double weight_sum() const { return weights.sum(); }
};

/// Edge rule: centered arc-length parameters plus the mapped global points.
struct EdgeQuadrature {
  std::vector<double> params;
  std::vector<Vec2> points;
  Eigen::VectorXd weights;
  int degree = 0;

  double weight_sum() const { return weights.sum(); }
};

/// Gauss-Legendre nodes/weights on [-1,1] (Golub-Welsch).
void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

/// Gauss rule on an edge, exact for arc-length polynomials of degree <= d.
EdgeQuadrature edge_rule(const EdgeFrame& edge, int degree);

/// Rule on a star-shaped polygon: fan triangulation from the star center,
/// collapsed tensor Gauss on each triangle. Exact to `degree`, all weights
/// positive. Throws MeshError if the fan would be degenerate.
QuadratureRule polygon_rule(const std::vector<Vec2>& cell_ccw,
                            const Vec2& star_center, int degree);

} // namespace vem
