#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "vem/mesh.hpp"
#include "vem/polynomial.hpp"
#include "vem/quadrature.hpp"

namespace vem {

/// How the three-dimensional affine kernel of the energy projector is pinned:
/// boundary means of v and grad v, volume means of grad v with a boundary
/// mean of v, or volume means of both (the latter needs interior moments,
/// so order >= 4).
enum class ConstraintMode { Boundary, VolumeGradient, VolumeMean };

/// Stabilization of the non-projected part: the weighted DOF form, the
/// boundary value/normal-derivative form, or the boundary tangential/normal
/// derivative form.
enum class StabVariant { Dof, BoundaryN, BoundaryTn };

ConstraintMode constraint_mode_from_string(const std::string& name);
StabVariant stab_variant_from_string(const std::string& name);
std::string to_string(ConstraintMode mode);
std::string to_string(StabVariant variant);

/// Local degree-of-freedom layout for order k on a polygon with n vertices:
/// per vertex (value, d/dx, d/dy), per edge the value moments (r-3 of them,
/// r = max(3,k)) followed by the normal-derivative moments (s-1, s = k-1),
/// then the interior moments against M_m^D (m = k-4).
struct DofLayout {
  int k = 2;
  int r = 3, s = 1, m = -2;
  int n_vertices = 0;
  int n_dofs = 0;

  static DofLayout make(int k, int n_vertices);

  int edge_v_count() const { return r - 3; }
  int edge_dn_count() const { return s - 1; }
  int per_edge() const { return edge_v_count() + edge_dn_count(); }
  int interior_count() const { return poly_dim(m); }

  int vertex_value(int i) const { return 3 * i; }
  int vertex_dx(int i) const { return 3 * i + 1; }
  int vertex_dy(int i) const { return 3 * i + 2; }
  int edge_base(int e) const { return 3 * n_vertices + e * per_edge(); }
  int edge_v_moment(int e, int j) const { return edge_base(e) + j; }
  int edge_dn_moment(int e, int j) const {
    return edge_base(e) + edge_v_count() + j;
  }
  int interior_moment(int j) const {
    return 3 * n_vertices + n_vertices * per_edge() + j;
  }
};

/// Matrices mapping a local DOF vector to polynomial coefficients.
struct LocalProjectors {
  Eigen::MatrixXd pi_delta;     // energy projector, dim P_k x N
  Eigen::MatrixXd pi_delta_dof; // same projection expressed in DOFs, N x N
  Eigen::MatrixXd pi0_k;        // L2 projector onto P_k, dim P_k x N
  Eigen::MatrixXd pi0_km4;      // L2 projector onto P_{k-4}, dim P_{k-4} x N
};

struct LocalMatrices {
  Eigen::MatrixXd consistency; // K_c
  Eigen::MatrixXd stability;   // K_s
  Eigen::MatrixXd stiffness;   // K_c + K_s
};

/// All local computations for one polygonal cell of order k in {2,3,4}.
///
/// Edge-moment DOFs are stored against the canonical (global) edge frame;
/// `edge_signs` records, per edge, whether the CCW traversal of this cell
/// agrees with the canonical direction (+1) or not (-1). Standalone cells
/// default to +1 everywhere. Instances are immutable after construction and
/// distinct cells can be processed concurrently.
class Element {
public:
  Element(std::vector<Vec2> polygon_ccw, int k,
          std::vector<int> edge_signs = {});
  Element(const PolygonalMesh& mesh, int cell, int k);

  int order() const { return k_; }
  int n_dofs() const { return layout_.n_dofs; }
  int dim_pk() const { return poly_dim(k_); }
  const DofLayout& layout() const { return layout_; }
  const CellGeometry& geometry() const { return geom_; }
  const CellFrame& frame() const { return frame_; }
  const std::vector<Vec2>& polygon() const { return verts_; }
  int n_edges() const { return static_cast<int>(verts_.size()); }
  const EdgeFrame& edge_frame(int e) const { return edge_frames_[e]; }

  /// Trace reconstruction as linear maps from the local DOF vector to edge
  /// polynomial coefficients in this cell's traversal frame: the value trace
  /// v|_e of degree r and the outward normal derivative trace of degree s.
  const Eigen::MatrixXd& value_trace(int e) const { return value_trace_[e]; }
  const Eigen::MatrixXd& normal_trace(int e) const { return normal_trace_[e]; }

  /// Cartesian derivative trace d v/d x_i on an edge, degree r-1, assembled
  /// from the arc-length derivative of the value trace and the normal trace.
  Eigen::MatrixXd cartesian_derivative_trace(int e, int axis) const;

  /// DOFs of the scaled monomials of M_k^D, N x dim P_k.
  const Eigen::MatrixXd& monomial_dofs() const { return monomial_dofs_; }

  /// Hessian-energy Gram matrix of M_k^D (exact).
  const Eigen::MatrixXd& energy_gram() const { return energy_gram_; }

  /// Mass matrix of M_k^D (exact).
  const Eigen::MatrixXd& mass_k() const { return mass_k_; }

  /// DOF functionals applied to smooth data.
  Eigen::VectorXd dofs_of(const std::function<double(const Vec2&)>& value,
                          const std::function<Vec2(const Vec2&)>& gradient) const;

  const LocalProjectors& projectors(ConstraintMode mode) const;

  /// Symmetric PSD stabilization matrix; callers apply it to
  /// (I - pi_delta_dof)-filtered DOF vectors.
  Eigen::MatrixXd stabilization(StabVariant variant) const;

  LocalMatrices local_stiffness(ConstraintMode mode, StabVariant variant) const;

  Eigen::VectorXd local_load(const std::function<double(const Vec2&)>& f,
                             ConstraintMode mode) const;

  /// Scaled trace semi-norm of a DOF vector:
  /// (|Pi0_{k-4} v|^2 + h |v|^2_bnd + h^3 |grad v|^2_bnd)^(1/2).
  double semi_norm(const Eigen::VectorXd& dofs) const;

  const QuadratureRule& cell_rule() const { return cell_rule_; }
  const QuadratureRule& cell_rule_hi() const { return cell_rule_hi_; }
  const EdgeQuadrature& edge_rule(int e) const { return edge_rules_[e]; }

  /// Polynomial from projector coefficients.
  CellPoly make_poly(const Eigen::VectorXd& coeffs, int degree) const;

private:
  void build_traces();
  void build_monomial_dofs();
  void build_energy_gram();
  Eigen::MatrixXd moment_matrix() const; // right-hand sides of the projector
  void constraint_rows(ConstraintMode mode, Eigen::MatrixXd& C,
                       Eigen::MatrixXd& R) const;
  Eigen::MatrixXd interior_l2_map() const; // pi0_km4, mode independent

  std::vector<Vec2> verts_;
  int k_ = 2;
  DofLayout layout_;
  CellGeometry geom_;
  CellFrame frame_;
  std::vector<EdgeFrame> edge_frames_;
  std::vector<int> edge_signs_;
  std::vector<EdgeQuadrature> edge_rules_;
  QuadratureRule cell_rule_;
  QuadratureRule cell_rule_hi_;
  Eigen::MatrixXd mass_k_;
  std::vector<Eigen::MatrixXd> value_trace_;
  std::vector<Eigen::MatrixXd> normal_trace_;
  Eigen::MatrixXd monomial_dofs_;
  Eigen::MatrixXd energy_gram_;
  mutable std::array<std::unique_ptr<LocalProjectors>, 3> projector_cache_;
};

/// Extremal generalized eigenvalues of the pencil (S_a, S_b) restricted to
/// the range of (I - pi_delta_dof); used to compare stabilization variants.
std::pair<double, double> stabilization_spread(const Element& element,
                                               StabVariant a, StabVariant b,
                                               ConstraintMode mode);

} // namespace vem
