#include "vem/element.hpp"

#include <cassert>
#include <cmath>
#include <sstream>

#include "vem/errors.hpp"

namespace vem {

ConstraintMode constraint_mode_from_string(const std::string& name) {
  if (name == "boundary") return ConstraintMode::Boundary;
  if (name == "volume-gradient") return ConstraintMode::VolumeGradient;
  if (name == "volume-mean") return ConstraintMode::VolumeMean;
  throw Error("unknown constraint mode: " + name);
}

StabVariant stab_variant_from_string(const std::string& name) {
  if (name == "dof") return StabVariant::Dof;
  if (name == "boundary-n") return StabVariant::BoundaryN;
  if (name == "boundary-tn") return StabVariant::BoundaryTn;
  throw Error("unknown stabilization variant: " + name);
}

std::string to_string(ConstraintMode mode) {
  switch (mode) {
    case ConstraintMode::Boundary: return "boundary";
    case ConstraintMode::VolumeGradient: return "volume-gradient";
    case ConstraintMode::VolumeMean: return "volume-mean";
  }
  return "?";
}

std::string to_string(StabVariant variant) {
  switch (variant) {
    case StabVariant::Dof: return "dof";
    case StabVariant::BoundaryN: return "boundary-n";
    case StabVariant::BoundaryTn: return "boundary-tn";
  }
  return "?";
}

DofLayout DofLayout::make(int k, int n_vertices) {
  if (k < 2 || k > 4) {
    std::ostringstream os;
    os << "unsupported order k = " << k << " (supported: 2, 3, 4)";
    throw Error(os.str());
  }
  DofLayout l;
  l.k = k;
  l.r = std::max(3, k);
  l.s = k - 1;
  l.m = k - 4;
  l.n_vertices = n_vertices;
  l.n_dofs = 3 * n_vertices + n_vertices * l.per_edge() + l.interior_count();
  return l;
}

Element::Element(const PolygonalMesh& mesh, int cell, int k)
    : Element(mesh.cell_polygon(cell), k, mesh.cell_edge_sign[cell]) {}

Element::Element(std::vector<Vec2> polygon_ccw, int k,
                 std::vector<int> edge_signs)
    : verts_(std::move(polygon_ccw)), k_(k) {
  const int nv = static_cast<int>(verts_.size());
  layout_ = DofLayout::make(k, nv);
  geom_ = cell_geometry(verts_);
  if (!geom_.star_shaped)
    throw MeshError("cell is not star-shaped (empty kernel); "
                    "see the regularity report");
  frame_ = CellFrame{geom_.centroid, geom_.diameter};

  edge_signs_ = edge_signs.empty() ? std::vector<int>(nv, 1)
                                   : std::move(edge_signs);
  assert(static_cast<int>(edge_signs_.size()) == nv);

  edge_frames_.reserve(nv);
  edge_rules_.reserve(nv);
  const int edge_degree = 2 * std::max(layout_.r, k_) + 2;
  for (int e = 0; e < nv; ++e) {
    edge_frames_.push_back(make_edge_frame(verts_[e], verts_[(e + 1) % nv]));
    edge_rules_.push_back(vem::edge_rule(edge_frames_[e], edge_degree));
  }

  cell_rule_ = polygon_rule(verts_, geom_.star_center, 2 * k_);
  cell_rule_hi_ = polygon_rule(verts_, geom_.star_center, 2 * k_ + 4);
  mass_k_ = cell_mass_matrix(CellBasis{frame_, k_}, CellBasis{frame_, k_},
                             cell_rule_);

  build_traces();
  build_monomial_dofs();
  build_energy_gram();
}

void Element::build_traces() {
  const int nv = n_edges();
  const int r = layout_.r, s = layout_.s;
  const int N = layout_.n_dofs;
  value_trace_.resize(nv);
  normal_trace_.resize(nv);

  for (int e = 0; e < nv; ++e) {
    const EdgeFrame& ef = edge_frames_[e];
    const double h = ef.length;
    const int i0 = e, i1 = (e + 1) % nv;
    const double sg = edge_signs_[e];

    // Value trace in P_r(e): endpoint values, endpoint tangential
    // derivatives, and the r-3 edge value moments.
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(r + 1, r + 1);
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(r + 1, N);
    for (int j = 0; j <= r; ++j) {
      A(0, j) = std::pow(-0.5, j);
      A(1, j) = std::pow(0.5, j);
      if (j >= 1) {
        A(2, j) = j * std::pow(-0.5, j - 1) / h;
        A(3, j) = j * std::pow(0.5, j - 1) / h;
      }
    }
    C(0, layout_.vertex_value(i0)) = 1.0;
    C(1, layout_.vertex_value(i1)) = 1.0;
    C(2, layout_.vertex_dx(i0)) = ef.tangent.x();
    C(2, layout_.vertex_dy(i0)) = ef.tangent.y();
    C(3, layout_.vertex_dx(i1)) = ef.tangent.x();
    C(3, layout_.vertex_dy(i1)) = ef.tangent.y();
    for (int l = 0; l < layout_.edge_v_count(); ++l) {
      for (int j = 0; j <= r; ++j)
        A(4 + l, j) = edge_basis_integral(l + j, h) / h;
      // stored moments use the canonical parameterization
      C(4 + l, layout_.edge_v_moment(e, l)) = std::pow(sg, l);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (!lu.isInvertible())
      throw Error("singular edge value-trace reconstruction");
    value_trace_[e] = lu.solve(C);

    // Outward normal derivative trace in P_s(e): endpoint normal derivatives
    // and the s-1 normal moments (stored against the canonical normal).
    Eigen::MatrixXd An = Eigen::MatrixXd::Zero(s + 1, s + 1);
    Eigen::MatrixXd Cn = Eigen::MatrixXd::Zero(s + 1, N);
    for (int j = 0; j <= s; ++j) {
      An(0, j) = std::pow(-0.5, j);
      An(1, j) = std::pow(0.5, j);
    }
    Cn(0, layout_.vertex_dx(i0)) = ef.normal.x();
    Cn(0, layout_.vertex_dy(i0)) = ef.normal.y();
    Cn(1, layout_.vertex_dx(i1)) = ef.normal.x();
    Cn(1, layout_.vertex_dy(i1)) = ef.normal.y();
    for (int l = 0; l < layout_.edge_dn_count(); ++l) {
      for (int j = 0; j <= s; ++j)
        An(2 + l, j) = edge_basis_integral(l + j, h) / h;
      Cn(2 + l, layout_.edge_dn_moment(e, l)) = std::pow(sg, l + 1);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lun(An);
    if (!lun.isInvertible())
      throw Error("singular edge normal-trace reconstruction");
    normal_trace_[e] = lun.solve(Cn);
  }
}

Eigen::MatrixXd Element::cartesian_derivative_trace(int e, int axis) const {
  const EdgeFrame& ef = edge_frames_[e];
  const int r = layout_.r, s = layout_.s;
  const double h = ef.length;
  // d/ds map on edge coefficients, degree r -> r-1
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(r, r + 1);
  for (int j = 1; j <= r; ++j) D(j - 1, j) = j / h;

  const double tc = axis == 0 ? ef.tangent.x() : ef.tangent.y();
  const double nc = axis == 0 ? ef.normal.x() : ef.normal.y();
  Eigen::MatrixXd T = tc * (D * value_trace_[e]);
  T.topRows(s + 1) += nc * normal_trace_[e]; // s <= r-1 by construction
  return T;
}

void Element::build_monomial_dofs() {
  const int N = layout_.n_dofs;
  const int nk = dim_pk();
  const CellBasis basis{frame_, k_};
  monomial_dofs_.setZero(N, nk);

  const Eigen::MatrixXd V = eval_basis(basis, verts_);
  const Eigen::MatrixXd Vx = eval_basis_dx(basis, verts_);
  const Eigen::MatrixXd Vy = eval_basis_dy(basis, verts_);
  for (int i = 0; i < n_edges(); ++i) {
    monomial_dofs_.row(layout_.vertex_value(i)) = V.row(i);
    monomial_dofs_.row(layout_.vertex_dx(i)) = Vx.row(i);
    monomial_dofs_.row(layout_.vertex_dy(i)) = Vy.row(i);
  }

  for (int e = 0; e < n_edges(); ++e) {
    const EdgeQuadrature& q = edge_rules_[e];
    const EdgeFrame& ef = edge_frames_[e];
    const double sg = edge_signs_[e];
    const Eigen::MatrixXd P = eval_basis(basis, q.points);
    const Eigen::MatrixXd Px = eval_basis_dx(basis, q.points);
    const Eigen::MatrixXd Py = eval_basis_dy(basis, q.points);
    const Eigen::MatrixXd E = eval_edge_basis(
        EdgeBasis{ef.length, std::max(layout_.r - 4, layout_.s - 2)}, q.params);
    for (int l = 0; l < layout_.edge_v_count(); ++l) {
      const Eigen::VectorXd w = q.weights.cwiseProduct(E.col(l));
      monomial_dofs_.row(layout_.edge_v_moment(e, l)) =
          std::pow(sg, l) / ef.length * (w.transpose() * P);
    }
    for (int l = 0; l < layout_.edge_dn_count(); ++l) {
      const Eigen::VectorXd w = q.weights.cwiseProduct(E.col(l));
      monomial_dofs_.row(layout_.edge_dn_moment(e, l)) =
          std::pow(sg, l + 1) / ef.length *
          (w.transpose() * (ef.normal.x() * Px + ef.normal.y() * Py));
    }
  }

  for (int j = 0; j < layout_.interior_count(); ++j)
    monomial_dofs_.row(layout_.interior_moment(j)) =
        mass_k_.row(j) / geom_.area;
}

void Element::build_energy_gram() {
  const int nk = dim_pk();
  const Eigen::MatrixXd Dx = derivative_map_x(frame_, k_);
  const Eigen::MatrixXd Dy = derivative_map_y(frame_, k_);
  const Eigen::MatrixXd Dxx = derivative_map_x(frame_, k_ - 1) * Dx;
  const Eigen::MatrixXd Dyy = derivative_map_y(frame_, k_ - 1) * Dy;
  const Eigen::MatrixXd Dxy = derivative_map_y(frame_, k_ - 1) * Dx;
  const Eigen::MatrixXd M = mass_k_.topLeftCorner(poly_dim(k_ - 2),
                                                  poly_dim(k_ - 2));
  energy_gram_ = Dxx.transpose() * M * Dxx + Dyy.transpose() * M * Dyy +
                 2.0 * Dxy.transpose() * M * Dxy;
  energy_gram_ = 0.5 * (energy_gram_ + energy_gram_.transpose()).eval();
  assert(energy_gram_.rows() == nk);
  (void)nk;
}

Eigen::VectorXd
Element::dofs_of(const std::function<double(const Vec2&)>& value,
                 const std::function<Vec2(const Vec2&)>& gradient) const {
  Eigen::VectorXd dofs = Eigen::VectorXd::Zero(layout_.n_dofs);
  for (int i = 0; i < n_edges(); ++i) {
    dofs[layout_.vertex_value(i)] = value(verts_[i]);
    const Vec2 g = gradient(verts_[i]);
    dofs[layout_.vertex_dx(i)] = g.x();
    dofs[layout_.vertex_dy(i)] = g.y();
  }
  for (int e = 0; e < n_edges(); ++e) {
    const EdgeQuadrature& q = edge_rules_[e];
    const EdgeFrame& ef = edge_frames_[e];
    const double sg = edge_signs_[e];
    const Eigen::MatrixXd E = eval_edge_basis(
        EdgeBasis{ef.length, std::max(layout_.r - 4, layout_.s - 2)}, q.params);
    for (int l = 0; l < layout_.edge_v_count(); ++l) {
      double acc = 0.0;
      for (int p = 0; p < q.weights.size(); ++p)
        acc += q.weights[p] * E(p, l) * value(q.points[p]);
      dofs[layout_.edge_v_moment(e, l)] = std::pow(sg, l) * acc / ef.length;
    }
    for (int l = 0; l < layout_.edge_dn_count(); ++l) {
      double acc = 0.0;
      for (int p = 0; p < q.weights.size(); ++p)
        acc += q.weights[p] * E(p, l) * gradient(q.points[p]).dot(ef.normal);
      dofs[layout_.edge_dn_moment(e, l)] =
          std::pow(sg, l + 1) * acc / ef.length;
    }
  }
  if (layout_.interior_count() > 0) {
    const Eigen::MatrixXd P =
        eval_basis(CellBasis{frame_, layout_.m}, cell_rule_hi_.points);
    Eigen::VectorXd fw(cell_rule_hi_.weights.size());
    for (int p = 0; p < fw.size(); ++p)
      fw[p] = cell_rule_hi_.weights[p] * value(cell_rule_hi_.points[p]);
    const Eigen::VectorXd moments = P.transpose() * fw;
    for (int j = 0; j < layout_.interior_count(); ++j)
      dofs[layout_.interior_moment(j)] = moments[j] / geom_.area;
  }
  return dofs;
}

Eigen::MatrixXd Element::moment_matrix() const {
  // Row j holds the Hessian-energy pairing of monomial m_j with the DOF
  // basis, evaluated through the boundary representation: a volume term
  // against the interior moments, edge terms against the reconstructed
  // traces, and the corner jumps of the twisting moment (the arc-length
  // derivative of U_nt across a vertex acts as a point load there).
  const int nk = dim_pk();
  const int N = layout_.n_dofs;
  const int r = layout_.r, s = layout_.s;
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(nk, N);

  std::vector<Eigen::MatrixXd> nn_maps(n_edges()), qv_maps(n_edges());
  for (int e = 0; e < n_edges(); ++e) {
    const double h = edge_frames_[e].length;
    nn_maps[e] = edge_mass_matrix(std::max(k_ - 2, 0), s, h) * normal_trace_[e];
    qv_maps[e] = edge_mass_matrix(std::max(k_ - 3, 0), r, h) * value_trace_[e];
  }

  for (int j = 0; j < nk; ++j) {
    CellPoly mono = CellPoly::zero(frame_, k_);
    mono.coeffs[j] = 1.0;

    if (layout_.interior_count() > 0) {
      const CellPoly lap2 = bilaplacian(mono);
      for (int b = 0; b < layout_.interior_count(); ++b)
        B(j, layout_.interior_moment(b)) += geom_.area * lap2.coeffs[b];
    }

    std::vector<BoundaryOperators> ops;
    ops.reserve(n_edges());
    for (int e = 0; e < n_edges(); ++e) {
      ops.push_back(boundary_operators(mono, edge_frames_[e]));
      const BoundaryOperators& op = ops.back();
      B.row(j) += op.u_nn.coeffs.transpose() * nn_maps[e];
      B.row(j) -= (op.q_n.coeffs + op.dunt_dt.coeffs).transpose() * qv_maps[e];
    }
    for (int i = 0; i < n_edges(); ++i) {
      const int prev = (i + n_edges() - 1) % n_edges();
      const double jump = ops[prev].u_nt.value(0.5 * edge_frames_[prev].length) -
                          ops[i].u_nt.value(-0.5 * edge_frames_[i].length);
      B(j, layout_.vertex_value(i)) += jump;
    }
  }
  return B;
}

void Element::constraint_rows(ConstraintMode mode, Eigen::MatrixXd& C,
                              Eigen::MatrixXd& R) const {
  const int nk = dim_pk();
  const int N = layout_.n_dofs;
  const int r = layout_.r;
  C.setZero(3, nk);
  R.setZero(3, N);

  if (mode == ConstraintMode::VolumeMean && k_ < 4)
    throw Error("volume-mean constraints need interior moments (k >= 4)");

  // edge-basis integral row vectors
  auto int_row = [](int degree, double h) {
    Eigen::RowVectorXd v(degree + 1);
    for (int j = 0; j <= degree; ++j) v[j] = edge_basis_integral(j, h);
    return v;
  };

  const CellBasis basis{frame_, k_};

  if (mode == ConstraintMode::Boundary) {
    // boundary means of both gradient components
    for (int e = 0; e < n_edges(); ++e) {
      const EdgeFrame& ef = edge_frames_[e];
      const EdgeQuadrature& q = edge_rules_[e];
      const Eigen::RowVectorXd wq = q.weights.transpose();
      C.row(0) += wq * eval_basis_dx(basis, q.points);
      C.row(1) += wq * eval_basis_dy(basis, q.points);

      const Eigen::RowVectorXd iv = int_row(r - 1, ef.length);
      for (int axis = 0; axis < 2; ++axis)
        R.row(axis) += iv * cartesian_derivative_trace(e, axis);
    }
  } else {
    // volume means of the gradient; the DOF side uses the divergence
    // identity, integrating v n_i over the boundary
    const Eigen::RowVectorXd wq = cell_rule_.weights.transpose();
    C.row(0) = wq * eval_basis_dx(basis, cell_rule_.points);
    C.row(1) = wq * eval_basis_dy(basis, cell_rule_.points);
    for (int e = 0; e < n_edges(); ++e) {
      const EdgeFrame& ef = edge_frames_[e];
      const Eigen::RowVectorXd iv = int_row(r, ef.length);
      R.row(0) += ef.normal.x() * (iv * value_trace_[e]);
      R.row(1) += ef.normal.y() * (iv * value_trace_[e]);
    }
  }

  if (mode == ConstraintMode::VolumeMean) {
    C.row(2) = mass_k_.row(0); // integral of each monomial
    R(2, layout_.interior_moment(0)) = geom_.area;
  } else {
    for (int e = 0; e < n_edges(); ++e) {
      const EdgeFrame& ef = edge_frames_[e];
      const EdgeQuadrature& q = edge_rules_[e];
      C.row(2) += q.weights.transpose() * eval_basis(basis, q.points);
      R.row(2) += int_row(r, ef.length) * value_trace_[e];
    }
  }
}

Eigen::MatrixXd Element::interior_l2_map() const {
  const int dm = layout_.interior_count();
  Eigen::MatrixXd map = Eigen::MatrixXd::Zero(dm, layout_.n_dofs);
  if (dm == 0) return map;
  Eigen::MatrixXd sel = Eigen::MatrixXd::Zero(dm, layout_.n_dofs);
  for (int j = 0; j < dm; ++j) sel(j, layout_.interior_moment(j)) = geom_.area;
  const Eigen::MatrixXd H0 = mass_k_.topLeftCorner(dm, dm);
  map = H0.ldlt().solve(sel);
  return map;
}

const LocalProjectors& Element::projectors(ConstraintMode mode) const {
  auto& slot = projector_cache_[static_cast<std::size_t>(mode)];
  if (slot) return *slot;

  const int nk = dim_pk();
  const int N = layout_.n_dofs;

  Eigen::MatrixXd C, R;
  constraint_rows(mode, C, R);

  // Equilibrate with the L2 norms of the monomials; on anisotropic cells the
  // raw scaled basis is graded and would cost several digits in the solve.
  const Eigen::VectorXd basis_scale =
      mass_k_.diagonal().cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd G_eq = basis_scale.asDiagonal() * energy_gram_ *
                               basis_scale.asDiagonal();
  Eigen::MatrixXd C_eq = C * basis_scale.asDiagonal();
  Eigen::MatrixXd R_eq = R;
  for (int i = 0; i < 3; ++i) {
    const double row_scale = C_eq.row(i).norm();
    C_eq.row(i) /= row_scale;
    R_eq.row(i) /= row_scale;
  }

  Eigen::MatrixXd saddle = Eigen::MatrixXd::Zero(nk + 3, nk + 3);
  saddle.topLeftCorner(nk, nk) = G_eq;
  saddle.topRightCorner(nk, 3) = C_eq.transpose();
  saddle.bottomLeftCorner(3, nk) = C_eq;

  Eigen::MatrixXd rhs(nk + 3, N);
  rhs.topRows(nk) = basis_scale.asDiagonal() * moment_matrix();
  rhs.bottomRows(3) = R_eq;

  Eigen::FullPivLU<Eigen::MatrixXd> lu(saddle);
  if (!lu.isInvertible())
    throw Error("singular constrained projector system (degenerate cell?)");

  auto proj = std::make_unique<LocalProjectors>();
  proj->pi_delta = basis_scale.asDiagonal() * lu.solve(rhs).topRows(nk);
  // group the product through the normalized basis so that the tiny-norm
  // coefficient rows do not amplify rounding noise
  proj->pi_delta_dof = (monomial_dofs_ * basis_scale.asDiagonal()) *
                       (basis_scale.cwiseInverse().asDiagonal() *
                        proj->pi_delta);
  proj->pi0_km4 = interior_l2_map();

  if (k_ < 4) {
    proj->pi0_k = proj->pi_delta;
  } else {
    const int dm = layout_.interior_count();
    const Eigen::MatrixXd H0 = mass_k_.topLeftCorner(dm, dm);
    const Eigen::MatrixXd Hx = mass_k_.topRows(dm);
    Eigen::MatrixXd sel = Eigen::MatrixXd::Zero(dm, N);
    for (int j = 0; j < dm; ++j)
      sel(j, layout_.interior_moment(j)) = geom_.area;
    const Eigen::MatrixXd corr =
        H0.ldlt().solve(sel - Hx * proj->pi_delta);
    proj->pi0_k = proj->pi_delta;
    proj->pi0_k.topRows(dm) += corr;
  }

  slot = std::move(proj);
  return *slot;
}

Eigen::MatrixXd Element::stabilization(StabVariant variant) const {
  const int N = layout_.n_dofs;
  const int r = layout_.r, s = layout_.s;
  const double h = frame_.h;
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(N, N);

  switch (variant) {
    case StabVariant::Dof: {
      if (layout_.interior_count() > 0) {
        const Eigen::MatrixXd P0 = interior_l2_map();
        const Eigen::MatrixXd H0 = mass_k_.topLeftCorner(
            layout_.interior_count(), layout_.interior_count());
        S += std::pow(h, -4) * P0.transpose() * H0 * P0;
      }
      for (int e = 0; e < n_edges(); ++e) {
        const double he = edge_frames_[e].length;
        S += std::pow(h, -3) * value_trace_[e].transpose() *
             edge_mass_matrix(r, r, he) * value_trace_[e];
        for (int axis = 0; axis < 2; ++axis) {
          const Eigen::MatrixXd T = cartesian_derivative_trace(e, axis);
          S += std::pow(h, -1) * T.transpose() *
               edge_mass_matrix(r - 1, r - 1, he) * T;
        }
      }
      break;
    }
    case StabVariant::BoundaryN: {
      for (int e = 0; e < n_edges(); ++e) {
        const double he = edge_frames_[e].length;
        S += std::pow(h, -3) * value_trace_[e].transpose() *
             edge_mass_matrix(r, r, he) * value_trace_[e];
        S += std::pow(h, -1) * normal_trace_[e].transpose() *
             edge_mass_matrix(s, s, he) * normal_trace_[e];
      }
      break;
    }
    case StabVariant::BoundaryTn: {
      for (int e = 0; e < n_edges(); ++e) {
        const double he = edge_frames_[e].length;
        Eigen::MatrixXd D = Eigen::MatrixXd::Zero(r, r + 1);
        for (int j = 1; j <= r; ++j) D(j - 1, j) = j / he;
        const Eigen::MatrixXd Tt = D * value_trace_[e];
        S += std::pow(h, -1) * Tt.transpose() *
             edge_mass_matrix(r - 1, r - 1, he) * Tt;
        S += std::pow(h, -1) * normal_trace_[e].transpose() *
             edge_mass_matrix(s, s, he) * normal_trace_[e];
      }
      break;
    }
  }
  return 0.5 * (S + S.transpose()).eval();
}

LocalMatrices Element::local_stiffness(ConstraintMode mode,
                                       StabVariant variant) const {
  const LocalProjectors& proj = projectors(mode);
  LocalMatrices out;
  // evaluate the triple product in the L2-normalized basis (all factors
  // O(1) there, which matters on anisotropic cells)
  const Eigen::VectorXd n = mass_k_.diagonal().cwiseSqrt();
  const Eigen::MatrixXd pi_n = n.asDiagonal() * proj.pi_delta;
  const Eigen::MatrixXd gram_n = n.cwiseInverse().asDiagonal() * energy_gram_ *
                                 n.cwiseInverse().asDiagonal();
  out.consistency = pi_n.transpose() * gram_n * pi_n;
  out.consistency =
      0.5 * (out.consistency + out.consistency.transpose()).eval();

  const Eigen::MatrixXd filter =
      Eigen::MatrixXd::Identity(n_dofs(), n_dofs()) - proj.pi_delta_dof;
  out.stability = filter.transpose() * stabilization(variant) * filter;
  out.stability = 0.5 * (out.stability + out.stability.transpose()).eval();

  out.stiffness = out.consistency + out.stability;
  return out;
}

Eigen::VectorXd Element::local_load(const std::function<double(const Vec2&)>& f,
                                    ConstraintMode mode) const {
  const LocalProjectors& proj = projectors(mode);
  const int j = (k_ <= 3) ? k_ : k_ - 1;
  const int dj = poly_dim(j);

  const Eigen::MatrixXd P =
      eval_basis(CellBasis{frame_, j}, cell_rule_hi_.points);
  Eigen::VectorXd fw(cell_rule_hi_.weights.size());
  for (int p = 0; p < fw.size(); ++p)
    fw[p] = cell_rule_hi_.weights[p] * f(cell_rule_hi_.points[p]);
  const Eigen::VectorXd moments = P.transpose() * fw;

  if (k_ <= 3) return proj.pi0_k.transpose() * moments;

  // order >= 4: L2 re-projection of pi0_k onto P_{k-1} via the mass system
  const Eigen::MatrixXd Mj = mass_k_.topLeftCorner(dj, dj);
  const Eigen::MatrixXd Mx = mass_k_.topRows(dj);
  const Eigen::MatrixXd xi = Mj.ldlt().solve(Mx * proj.pi0_k);
  return xi.transpose() * moments;
}

double Element::semi_norm(const Eigen::VectorXd& dofs) const {
  const int r = layout_.r;
  const double h = frame_.h;
  double acc = 0.0;
  if (layout_.interior_count() > 0) {
    const Eigen::VectorXd rho = interior_l2_map() * dofs;
    const Eigen::MatrixXd H0 = mass_k_.topLeftCorner(
        layout_.interior_count(), layout_.interior_count());
    acc += rho.dot(H0 * rho);
  }
  for (int e = 0; e < n_edges(); ++e) {
    const double he = edge_frames_[e].length;
    const Eigen::VectorXd tv = value_trace_[e] * dofs;
    acc += h * tv.dot(edge_mass_matrix(r, r, he) * tv);
    for (int axis = 0; axis < 2; ++axis) {
      const Eigen::VectorXd td = cartesian_derivative_trace(e, axis) * dofs;
      acc += h * h * h * td.dot(edge_mass_matrix(r - 1, r - 1, he) * td);
    }
  }
  return std::sqrt(acc);
}

CellPoly Element::make_poly(const Eigen::VectorXd& coeffs, int degree) const {
  CellPoly p = CellPoly::zero(frame_, degree);
  p.coeffs = coeffs;
  return p;
}

std::pair<double, double> stabilization_spread(const Element& element,
                                               StabVariant a, StabVariant b,
                                               ConstraintMode mode) {
  const int N = element.n_dofs();
  const Eigen::MatrixXd filter =
      Eigen::MatrixXd::Identity(N, N) - element.projectors(mode).pi_delta_dof;

  // Orthonormal basis of the range of the filter (complement of the DOF
  // vectors of P_k).
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(filter);
  const int rank = N - element.dim_pk();
  const Eigen::MatrixXd Q =
      qr.householderQ() * Eigen::MatrixXd::Identity(N, rank);

  const Eigen::MatrixXd Sa =
      Q.transpose() * element.stabilization(a) * Q;
  const Eigen::MatrixXd Sb =
      Q.transpose() * element.stabilization(b) * Q;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(Sa, Sb);
  const Eigen::VectorXd ev = ges.eigenvalues();
  return {ev.minCoeff(), ev.maxCoeff()};
}

} // namespace vem
