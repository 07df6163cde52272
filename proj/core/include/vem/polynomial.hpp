#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "vem/geometry.hpp"

namespace vem {

struct QuadratureRule; // quadrature.hpp

/// Reference data of a cell: barycenter x_D and diameter h_D.
struct CellFrame {
  Vec2 center = Vec2::Zero();
  double h = 1.0;
};

/// Reference data of an oriented edge. `tangent` points along the traversal
/// direction, `normal` is the tangent rotated by -90 degrees (outward when
/// the edge is traversed CCW around its cell).
struct EdgeFrame {
  Vec2 midpoint = Vec2::Zero();
  double length = 0.0;
  Vec2 tangent = Vec2::UnitX();
  Vec2 normal = -Vec2::UnitY();

  /// Point at centered arc-length parameter tau in [-length/2, length/2].
  Vec2 point(double tau) const { return midpoint + tau * tangent; }
};

EdgeFrame make_edge_frame(const Vec2& a, const Vec2& b);

/// dim P_k in 2D: (k+1)(k+2)/2; zero for negative k.
int poly_dim(int degree);

/// Position of the monomial ((x-x_D)/h)^a1 ((y-y_D)/h)^a2 in the graded
/// ordering 1, x, y, x^2, xy, y^2, ... (within a degree, a1 descending).
int monomial_index(int a1, int a2);
std::pair<int, int> monomial_exponents(int index);

/// Scaled monomial basis {((x-x_D)/h_D)^alpha, |alpha| <= degree} on a cell.
struct CellBasis {
  CellFrame frame;
  int degree = 0;
  int size() const { return poly_dim(degree); }
};

/// Scaled monomial basis {((s-s_e)/h_e)^j, j=0..degree} on an edge,
/// parameterized by centered arc length.
struct EdgeBasis {
  double length = 0.0;
  int degree = 0;
  int size() const { return degree + 1; }
};

/// (points x basis) matrices of basis values and first derivatives.
Eigen::MatrixXd eval_basis(const CellBasis& basis,
                           const std::vector<Vec2>& points);
Eigen::MatrixXd eval_basis_dx(const CellBasis& basis,
                              const std::vector<Vec2>& points);
Eigen::MatrixXd eval_basis_dy(const CellBasis& basis,
                              const std::vector<Vec2>& points);

/// (params x basis) matrix of edge basis values at centered arc parameters.
Eigen::MatrixXd eval_edge_basis(const EdgeBasis& basis,
                                const std::vector<double>& params);

/// Polynomial on a cell, expanded in the scaled monomial basis.
struct CellPoly {
  CellFrame frame;
  int degree = 0;
  Eigen::VectorXd coeffs; // size poly_dim(degree)

  static CellPoly zero(const CellFrame& frame, int degree);
  double value(const Vec2& x) const;
  Vec2 gradient(const Vec2& x) const;
};

/// Polynomial on an edge in the scaled arc-length basis.
struct EdgePoly {
  double length = 0.0;
  int degree = 0;
  Eigen::VectorXd coeffs; // size degree+1

  static EdgePoly zero(double length, int degree);
  double value(double tau) const;
};

/// Exact differentiation as linear maps on coefficient vectors,
/// poly_dim(degree-1) x poly_dim(degree); they carry the 1/h factor.
Eigen::MatrixXd derivative_map_x(const CellFrame& frame, int degree);
Eigen::MatrixXd derivative_map_y(const CellFrame& frame, int degree);

CellPoly derivative_x(const CellPoly& p);
CellPoly derivative_y(const CellPoly& p);
CellPoly laplacian(const CellPoly& p);

/// The four second derivatives (u11, u22, u12, u21), each of degree k-2.
struct HessianQuad {
  CellPoly u11, u22, u12, u21;
};

HessianQuad hessian(const CellPoly& p);

/// u_xxxx + 2 u_xxyy + u_yyyy, degree max(k-4, 0); identically zero for k < 4.
CellPoly bilaplacian(const CellPoly& p);

/// Exact restriction of a cell polynomial to an edge (degree preserved).
EdgePoly restrict_to_edge(const CellPoly& p, const EdgeFrame& edge);

/// d/ds on edge polynomials (degree drops by one).
EdgePoly edge_derivative(const EdgePoly& p);

/// Traces of the plate boundary operators of a Hessian field along an edge:
/// normal bending moment U_nn = n.H n (degree k-2), twisting moment
/// U_nt = n.H t (degree k-2), normal shear Q_n = grad(lap).n (degree k-3)
/// and the arc-length derivative of U_nt (degree k-3).
struct BoundaryOperators {
  EdgePoly u_nn, u_nt, q_n, dunt_dt;
};

BoundaryOperators boundary_operators(const CellPoly& p, const EdgeFrame& edge);

/// integral over the edge of ((s-s_e)/h_e)^j: h (1/2)^j/(j+1) for even j.
double edge_basis_integral(int j, double length);

/// Exact edge mass matrix between M_degA^e and M_degB^e.
Eigen::MatrixXd edge_mass_matrix(int deg_a, int deg_b, double length);

/// Cell mass matrix between M_degA^D and M_degB^D by quadrature (must be
/// exact for degree deg_a+deg_b). Symmetric positive definite when a == b.
Eigen::MatrixXd cell_mass_matrix(const CellBasis& a, const CellBasis& b,
                                 const QuadratureRule& quad);

} // namespace vem
