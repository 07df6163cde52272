#include "vem/polynomial.hpp"

#include <cassert>
#include <cmath>

#include "vem/quadrature.hpp"

namespace vem {

EdgeFrame make_edge_frame(const Vec2& a, const Vec2& b) {
  EdgeFrame e;
  e.midpoint = 0.5 * (a + b);
  e.length = (b - a).norm();
  e.tangent = (b - a) / e.length;
  e.normal = rotate_minus90(e.tangent);
  return e;
}

int poly_dim(int degree) {
  if (degree < 0) return 0;
  return (degree + 1) * (degree + 2) / 2;
}

int monomial_index(int a1, int a2) {
  const int d = a1 + a2;
  return d * (d + 1) / 2 + a2;
}

std::pair<int, int> monomial_exponents(int index) {
  int d = 0;
  while (poly_dim(d) <= index) ++d;
  const int a2 = index - d * (d + 1) / 2;
  return {d - a2, a2};
}

namespace {

// Powers xi^0..xi^max for each point, (points x max+1).
Eigen::MatrixXd power_table(const Eigen::VectorXd& xi, int max_pow) {
  Eigen::MatrixXd P(xi.size(), max_pow + 1);
  P.col(0).setOnes();
  for (int j = 1; j <= max_pow; ++j)
    P.col(j) = P.col(j - 1).cwiseProduct(xi);
  return P;
}

} // namespace

Eigen::MatrixXd eval_basis(const CellBasis& basis,
                           const std::vector<Vec2>& points) {
  const int np = static_cast<int>(points.size());
  const int nb = basis.size();
  Eigen::VectorXd xi(np), eta(np);
  for (int p = 0; p < np; ++p) {
    xi[p] = (points[p].x() - basis.frame.center.x()) / basis.frame.h;
    eta[p] = (points[p].y() - basis.frame.center.y()) / basis.frame.h;
  }
  const Eigen::MatrixXd PX = power_table(xi, basis.degree);
  const Eigen::MatrixXd PY = power_table(eta, basis.degree);
  Eigen::MatrixXd M(np, nb);
  for (int j = 0; j < nb; ++j) {
    const auto [a1, a2] = monomial_exponents(j);
    M.col(j) = PX.col(a1).cwiseProduct(PY.col(a2));
  }
  return M;
}

Eigen::MatrixXd eval_basis_dx(const CellBasis& basis,
                              const std::vector<Vec2>& points) {
  const Eigen::MatrixXd M =
      eval_basis(CellBasis{basis.frame, basis.degree - 1}, points);
  Eigen::MatrixXd D(points.size(), basis.size());
  D.setZero();
  for (int j = 0; j < basis.size(); ++j) {
    const auto [a1, a2] = monomial_exponents(j);
    if (a1 > 0)
      D.col(j) = (a1 / basis.frame.h) * M.col(monomial_index(a1 - 1, a2));
  }
  return D;
}

Eigen::MatrixXd eval_basis_dy(const CellBasis& basis,
                              const std::vector<Vec2>& points) {
  const Eigen::MatrixXd M =
      eval_basis(CellBasis{basis.frame, basis.degree - 1}, points);
  Eigen::MatrixXd D(points.size(), basis.size());
  D.setZero();
  for (int j = 0; j < basis.size(); ++j) {
    const auto [a1, a2] = monomial_exponents(j);
    if (a2 > 0)
      D.col(j) = (a2 / basis.frame.h) * M.col(monomial_index(a1, a2 - 1));
  }
  return D;
}

Eigen::MatrixXd eval_edge_basis(const EdgeBasis& basis,
                                const std::vector<double>& params) {
  const int np = static_cast<int>(params.size());
  Eigen::MatrixXd M(np, basis.size());
  for (int p = 0; p < np; ++p) {
    const double s = params[p] / basis.length;
    double pw = 1.0;
    for (int j = 0; j <= basis.degree; ++j) {
      M(p, j) = pw;
      pw *= s;
    }
  }
  return M;
}

CellPoly CellPoly::zero(const CellFrame& frame, int degree) {
  return {frame, degree, Eigen::VectorXd::Zero(poly_dim(degree))};
}

double CellPoly::value(const Vec2& x) const {
  return (eval_basis(CellBasis{frame, degree}, {x}) * coeffs)(0);
}

Vec2 CellPoly::gradient(const Vec2& x) const {
  const CellBasis b{frame, degree};
  return Vec2((eval_basis_dx(b, {x}) * coeffs)(0),
              (eval_basis_dy(b, {x}) * coeffs)(0));
}

EdgePoly EdgePoly::zero(double length, int degree) {
  return {length, degree, Eigen::VectorXd::Zero(degree + 1)};
}

double EdgePoly::value(double tau) const {
  const double s = tau / length;
  double v = 0.0, pw = 1.0;
  for (int j = 0; j <= degree; ++j) {
    v += coeffs[j] * pw;
    pw *= s;
  }
  return v;
}

Eigen::MatrixXd derivative_map_x(const CellFrame& frame, int degree) {
  Eigen::MatrixXd D =
      Eigen::MatrixXd::Zero(poly_dim(degree - 1), poly_dim(degree));
  for (int j = 0; j < poly_dim(degree); ++j) {
    const auto [a1, a2] = monomial_exponents(j);
    if (a1 > 0) D(monomial_index(a1 - 1, a2), j) = a1 / frame.h;
  }
  return D;
}

Eigen::MatrixXd derivative_map_y(const CellFrame& frame, int degree) {
  Eigen::MatrixXd D =
      Eigen::MatrixXd::Zero(poly_dim(degree - 1), poly_dim(degree));
  for (int j = 0; j < poly_dim(degree); ++j) {
    const auto [a1, a2] = monomial_exponents(j);
    if (a2 > 0) D(monomial_index(a1, a2 - 1), j) = a2 / frame.h;
  }
  return D;
}

CellPoly derivative_x(const CellPoly& p) {
  const int d = std::max(p.degree - 1, 0);
  CellPoly out = CellPoly::zero(p.frame, d);
  if (p.degree >= 1) out.coeffs = derivative_map_x(p.frame, p.degree) * p.coeffs;
  return out;
}

CellPoly derivative_y(const CellPoly& p) {
  const int d = std::max(p.degree - 1, 0);
  CellPoly out = CellPoly::zero(p.frame, d);
  if (p.degree >= 1) out.coeffs = derivative_map_y(p.frame, p.degree) * p.coeffs;
  return out;
}

CellPoly laplacian(const CellPoly& p) {
  const CellPoly pxx = derivative_x(derivative_x(p));
  const CellPoly pyy = derivative_y(derivative_y(p));
  CellPoly out = pxx;
  out.coeffs += pyy.coeffs;
  return out;
}

HessianQuad hessian(const CellPoly& p) {
  HessianQuad h;
  h.u11 = derivative_x(derivative_x(p));
  h.u22 = derivative_y(derivative_y(p));
  h.u12 = derivative_y(derivative_x(p));
  h.u21 = h.u12;
  return h;
}

CellPoly bilaplacian(const CellPoly& p) {
  if (p.degree < 4) return CellPoly::zero(p.frame, 0);
  return laplacian(laplacian(p));
}

EdgePoly restrict_to_edge(const CellPoly& p, const EdgeFrame& edge) {
  const int d = p.degree;
  // Sample at d+1 parameters and solve the small Vandermonde system; the
  // restriction is a polynomial of degree d in arc length, so this is exact.
  std::vector<double> params(d + 1);
  std::vector<Vec2> pts(d + 1);
  for (int i = 0; i <= d; ++i) {
    const double t = (d == 0) ? 0.0 : (double(i) / d - 0.5);
    params[i] = t * edge.length;
    pts[i] = edge.point(params[i]);
  }
  const Eigen::MatrixXd V = eval_edge_basis(EdgeBasis{edge.length, d}, params);
  const Eigen::VectorXd vals = eval_basis(CellBasis{p.frame, d}, pts) * p.coeffs;
  EdgePoly out;
  out.length = edge.length;
  out.degree = d;
  out.coeffs = V.fullPivLu().solve(vals);
  return out;
}

EdgePoly edge_derivative(const EdgePoly& p) {
  EdgePoly out = EdgePoly::zero(p.length, std::max(p.degree - 1, 0));
  for (int j = 1; j <= p.degree; ++j)
    out.coeffs[j - 1] = p.coeffs[j] * j / p.length;
  return out;
}

BoundaryOperators boundary_operators(const CellPoly& p, const EdgeFrame& edge) {
  const HessianQuad H = hessian(p);
  const Vec2 n = edge.normal, t = edge.tangent;

  auto combine = [&](double c11, double c22, double c12) {
    CellPoly q = H.u11;
    q.coeffs = c11 * H.u11.coeffs + c22 * H.u22.coeffs + c12 * H.u12.coeffs;
    return q;
  };
  // n.H n and n.H t as polynomial fields of degree k-2
  const CellPoly unn = combine(n.x() * n.x(), n.y() * n.y(), 2.0 * n.x() * n.y());
  const CellPoly unt = combine(n.x() * t.x(), n.y() * t.y(),
                               n.x() * t.y() + n.y() * t.x());

  // Q_n = grad(lap p).n, degree k-3
  const CellPoly lap = laplacian(p);
  CellPoly qn = derivative_x(lap);
  qn.coeffs = n.x() * qn.coeffs + n.y() * derivative_y(lap).coeffs;

  // arc-length derivative of the twisting moment, degree k-3
  CellPoly dunt = derivative_x(unt);
  dunt.coeffs = t.x() * dunt.coeffs + t.y() * derivative_y(unt).coeffs;

  BoundaryOperators out;
  out.u_nn = restrict_to_edge(unn, edge);
  out.u_nt = restrict_to_edge(unt, edge);
  out.q_n = restrict_to_edge(qn, edge);
  out.dunt_dt = restrict_to_edge(dunt, edge);
  return out;
}

double edge_basis_integral(int j, double length) {
  if (j % 2 != 0) return 0.0;
  return length * std::pow(0.5, j) / (j + 1);
}

Eigen::MatrixXd edge_mass_matrix(int deg_a, int deg_b, double length) {
  Eigen::MatrixXd M(deg_a + 1, deg_b + 1);
  for (int i = 0; i <= deg_a; ++i)
    for (int j = 0; j <= deg_b; ++j)
      M(i, j) = edge_basis_integral(i + j, length);
  return M;
}

Eigen::MatrixXd cell_mass_matrix(const CellBasis& a, const CellBasis& b,
                                 const QuadratureRule& quad) {
  assert(quad.degree >= a.degree + b.degree);
  const Eigen::MatrixXd VA = eval_basis(a, quad.points);
  const Eigen::MatrixXd VB = eval_basis(b, quad.points);
  return VA.transpose() * quad.weights.asDiagonal() * VB;
}

} // namespace vem
