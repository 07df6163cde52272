#include "vem/quadrature.hpp"

#include <cmath>

#include "vem/errors.hpp"

namespace vem {

void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  nodes.resize(n);
  weights.resize(n);
  if (n == 1) {
    nodes[0] = 0.0;
    weights[0] = 2.0;
    return;
  }
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double b = i / std::sqrt(4.0 * i * i - 1.0);
    J(i, i - 1) = b;
    J(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  nodes = es.eigenvalues();
  for (int i = 0; i < n; ++i) {
    const double v0 = es.eigenvectors()(0, i);
    weights[i] = 2.0 * v0 * v0;
  }
}

EdgeQuadrature edge_rule(const EdgeFrame& edge, int degree) {
  const int n = (std::max(degree, 0) + 2) / 2; // exact for degree 2n-1 >= d
  Eigen::VectorXd x, w;
  gauss_legendre(n, x, w);
  EdgeQuadrature rule;
  rule.degree = 2 * n - 1;
  rule.params.resize(n);
  rule.points.resize(n);
  rule.weights.resize(n);
  const double half = 0.5 * edge.length;
  for (int i = 0; i < n; ++i) {
    rule.params[i] = half * x[i];
    rule.points[i] = edge.point(rule.params[i]);
    rule.weights[i] = half * w[i];
  }
  return rule;
}

QuadratureRule polygon_rule(const std::vector<Vec2>& cell_ccw,
                            const Vec2& star_center, int degree) {
  const int nv = static_cast<int>(cell_ccw.size());
  // Collapsed tensor Gauss on each fan triangle (c, a, b):
  //   x(u,v) = c + u (a - c) + u v (b - a),  Jacobian = 2 |T| u,
  // so a polynomial of degree d needs exactness d+1 in u and d in v.
  const int nu = (degree + 3) / 2;
  const int nvq = (degree + 2) / 2;
  Eigen::VectorXd xu, wu, xv, wv;
  gauss_legendre(nu, xu, wu);
  gauss_legendre(nvq, xv, wv);

  QuadratureRule rule;
  rule.degree = degree;
  rule.points.reserve(static_cast<std::size_t>(nv) * nu * nvq);
  std::vector<double> wts;
  wts.reserve(rule.points.capacity());

  for (int e = 0; e < nv; ++e) {
    const Vec2& a = cell_ccw[e];
    const Vec2& b = cell_ccw[(e + 1) % nv];
    const double area2 = cross2(a - star_center, b - star_center);
    if (area2 <= 0.0)
      throw MeshError("polygon_rule: fan triangle with non-positive area; "
                      "star center outside the kernel");
    for (int i = 0; i < nu; ++i) {
      const double u = 0.5 * (xu[i] + 1.0);
      for (int j = 0; j < nvq; ++j) {
        const double v = 0.5 * (xv[j] + 1.0);
        rule.points.push_back(star_center + u * (a - star_center) +
                              u * v * (b - a));
        wts.push_back(0.25 * wu[i] * wv[j] * area2 * u);
      }
    }
  }
  rule.weights = Eigen::Map<Eigen::VectorXd>(wts.data(), wts.size());
  return rule;
}

} // namespace vem
