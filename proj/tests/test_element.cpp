#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "support.hpp"
#include "vem/element.hpp"
#include "vem/errors.hpp"
#include "vem/system.hpp"

using namespace vem;

namespace {

// Independent Hessian-energy oracle: second derivatives of the scaled
// monomials from explicit exponent arithmetic, paired by quadrature.
double energy_pairing_oracle(const Element& el, int p, int q) {
  const CellFrame& fr = el.frame();
  const QuadratureRule& rule = el.cell_rule_hi();
  auto d2 = [&](int idx, const Vec2& x, int dx, int dy) {
    auto [a1, a2] = monomial_exponents(idx);
    double factor = 1.0;
    for (int d = 0; d < dx; ++d) factor *= a1 - d;
    for (int d = 0; d < dy; ++d) factor *= a2 - d;
    const int b1 = a1 - dx, b2 = a2 - dy;
    if (b1 < 0 || b2 < 0) return 0.0;
    const double xi = (x.x() - fr.center.x()) / fr.h;
    const double eta = (x.y() - fr.center.y()) / fr.h;
    return factor * std::pow(xi, b1) * std::pow(eta, b2) /
           (fr.h * fr.h);
  };
  double acc = 0.0;
  for (int i = 0; i < rule.weights.size(); ++i) {
    const Vec2& x = rule.points[i];
    acc += rule.weights[i] *
           (d2(p, x, 2, 0) * d2(q, x, 2, 0) + d2(p, x, 0, 2) * d2(q, x, 0, 2) +
            2.0 * d2(p, x, 1, 1) * d2(q, x, 1, 1));
  }
  return acc;
}

const std::vector<ConstraintMode> kAllModes = {ConstraintMode::Boundary,
                                               ConstraintMode::VolumeGradient,
                                               ConstraintMode::VolumeMean};
const std::vector<StabVariant> kAllVariants = {
    StabVariant::Dof, StabVariant::BoundaryN, StabVariant::BoundaryTn};

std::vector<ConstraintMode> admissible_modes(int k) {
  if (k >= 4) return kAllModes;
  return {ConstraintMode::Boundary, ConstraintMode::VolumeGradient};
}

} // namespace

TEST_CASE("dof layout counts") {
  const DofLayout k2 = DofLayout::make(2, 5);
  CHECK(k2.r == 3);
  CHECK(k2.s == 1);
  CHECK(k2.m == -2);
  CHECK(k2.n_dofs == 15);

  const DofLayout k3 = DofLayout::make(3, 5);
  CHECK(k3.n_dofs == 20);

  const DofLayout k4 = DofLayout::make(4, 4);
  CHECK(k4.n_dofs == 25); // 12 vertex + 4 value moments + 8 normal + 1 interior

  CHECK_THROWS_AS(DofLayout::make(5, 4), Error);
  CHECK_THROWS_AS(DofLayout::make(1, 4), Error);

  // matches dim P_{r,s}(boundary) + dim P_m
  for (int k = 2; k <= 4; ++k)
    for (int nv : {3, 4, 5, 6}) {
      const DofLayout l = DofLayout::make(k, nv);
      const int boundary_dim = 3 * nv + (l.r - 3) * nv + (l.s - 1) * nv;
      CHECK(l.n_dofs == boundary_dim + poly_dim(l.m));
    }
}

TEST_CASE("value trace reproduces linear and cubic data") {
  const Element el(testsupport::unit_square_cell(), 2);

  // v = x along the bottom edge (0,0)->(1,0)
  const Eigen::VectorXd dofs = el.dofs_of(
      [](const Vec2& p) { return p.x(); },
      [](const Vec2&) { return Vec2(1.0, 0.0); });
  const Eigen::VectorXd tv = el.value_trace(0) * dofs;
  EdgePoly trace{el.edge_frame(0).length, el.layout().r, tv};
  for (double t : {-0.5, -0.1, 0.3, 0.5}) {
    const double tau = t * el.edge_frame(0).length;
    CHECK(trace.value(tau) ==
          doctest::Approx(el.edge_frame(0).point(tau).x()).epsilon(1e-13));
  }
}

TEST_CASE("traces of polynomials in the local space are exact") {
  for (int k = 2; k <= 4; ++k) {
    CAPTURE(k);
    const Element el(testsupport::random_pentagon(), k);
    const CellPoly p = testsupport::random_poly(el.frame(), k, 99u + k);
    const Eigen::VectorXd dofs = el.dofs_of(
        [&](const Vec2& x) { return p.value(x); },
        [&](const Vec2& x) { return p.gradient(x); });
    for (int e = 0; e < el.n_edges(); ++e) {
      const EdgeFrame& ef = el.edge_frame(e);
      const EdgePoly v{ef.length, el.layout().r, el.value_trace(e) * dofs};
      const EdgePoly dn{ef.length, el.layout().s, el.normal_trace(e) * dofs};
      for (int i = 0; i < 7; ++i) {
        const double tau = ef.length * (i / 6.0 - 0.5);
        const Vec2 x = ef.point(tau);
        CHECK(v.value(tau) == doctest::Approx(p.value(x)).epsilon(1e-11));
        CHECK(dn.value(tau) ==
              doctest::Approx(p.gradient(x).dot(ef.normal)).epsilon(1e-11));
      }
    }
  }
}

TEST_CASE("value trace reproduces arbitrary cubics at k = 2") {
  // two-point Hermite data determines P_3 exactly
  const Element el(testsupport::random_pentagon(), 2);
  const CellPoly cubic = testsupport::random_poly(el.frame(), 3, 321u);
  const Eigen::VectorXd dofs = el.dofs_of(
      [&](const Vec2& x) { return cubic.value(x); },
      [&](const Vec2& x) { return cubic.gradient(x); });
  for (int e = 0; e < el.n_edges(); ++e) {
    const EdgeFrame& ef = el.edge_frame(e);
    const EdgePoly trace{ef.length, el.layout().r, el.value_trace(e) * dofs};
    for (int i = 0; i < 7; ++i) {
      const double tau = ef.length * (i / 6.0 - 0.5);
      CHECK(trace.value(tau) ==
            doctest::Approx(cubic.value(ef.point(tau))).epsilon(1e-11));
    }
  }
}

TEST_CASE("perpendicular endpoint gradients give a flat trace derivative") {
  const Element el(testsupport::unit_square_cell(), 2);
  const int e = 0; // bottom edge, tangent (1,0), normal (0,-1)
  Eigen::VectorXd dofs = Eigen::VectorXd::Zero(el.n_dofs());
  // gradients at both endpoints orthogonal to the edge; values zero
  dofs[el.layout().vertex_dy(0)] = 2.0;
  dofs[el.layout().vertex_dy(1)] = -1.5;
  const EdgePoly trace{el.edge_frame(e).length, el.layout().r,
                       el.value_trace(e) * dofs};
  const EdgePoly dtrace = edge_derivative(trace);
  const double half = 0.5 * el.edge_frame(e).length;
  CHECK(std::abs(dtrace.value(-half)) < 1e-13);
  CHECK(std::abs(dtrace.value(half)) < 1e-13);
}

TEST_CASE("edge traces respect the shared canonical storage") {
  // Two cells of a 1x2 mesh sharing one interior edge: the traces each cell
  // reconstructs from the shared DOFs must agree pointwise with opposite
  // outward normal derivatives.
  const PolygonalMesh mesh = build_mesh(
      {Vec2(0, 0), Vec2(1, 0), Vec2(2, 0), Vec2(2, 1), Vec2(1, 1), Vec2(0, 1)},
      {{0, 1, 4, 5}, {1, 2, 3, 4}});
  const int k = 4;
  const Element left(mesh, 0, k), right(mesh, 1, k);
  const GlobalDofMap map = GlobalDofMap::build(mesh, k);

  auto u = [](const Vec2& p) {
    return std::sin(p.x() + 0.3) * std::cos(0.7 * p.y());
  };
  auto grad = [](const Vec2& p) {
    return Vec2(std::cos(p.x() + 0.3) * std::cos(0.7 * p.y()),
                -0.7 * std::sin(p.x() + 0.3) * std::sin(0.7 * p.y()));
  };

  Eigen::VectorXd global = Eigen::VectorXd::Zero(map.n_total);
  const Eigen::VectorXd dl = left.dofs_of(u, grad);
  const Eigen::VectorXd dr = right.dofs_of(u, grad);
  for (int i = 0; i < left.n_dofs(); ++i)
    global[map.cell_to_global[0][i]] = dl[i];
  for (int i = 0; i < right.n_dofs(); ++i) {
    const double prev = global[map.cell_to_global[1][i]];
    if (prev != 0.0)
      CHECK(prev == doctest::Approx(dr[i]).epsilon(1e-12)); // shared DOFs agree
    global[map.cell_to_global[1][i]] = dr[i];
  }

  // the shared edge is local edge 1 of the left cell ((1,0)->(1,1)) and
  // local edge 3 of the right cell ((1,1)->(1,0))
  const EdgeFrame& ef_l = left.edge_frame(1);
  const EdgeFrame& ef_r = right.edge_frame(3);
  const EdgePoly vl{ef_l.length, left.layout().r, left.value_trace(1) * dl};
  const EdgePoly vr{ef_r.length, right.layout().r, right.value_trace(3) * dr};
  const EdgePoly nl{ef_l.length, left.layout().s, left.normal_trace(1) * dl};
  const EdgePoly nr{ef_r.length, right.layout().s, right.normal_trace(3) * dr};
  for (double t : {-0.4, 0.0, 0.25}) {
    const double tau = t * ef_l.length;
    const Vec2 x = ef_l.point(tau);
    // same physical point seen from the right cell at parameter -tau
    CHECK((ef_r.point(-tau) - x).norm() < 1e-14);
    CHECK(vl.value(tau) == doctest::Approx(vr.value(-tau)).epsilon(1e-12));
    CHECK(nl.value(tau) == doctest::Approx(-nr.value(-tau)).epsilon(1e-12));
  }
}

TEST_CASE("projector reproduces polynomials") {
  // The defect of reproducing monomial m_j is measured as the L2-relative
  // error |pi m_j - m_j| / |m_j|: coefficient-space defects on anisotropic
  // cells are amplified by the monomial norm ratios and say nothing about
  // the projection itself.
  for (const auto& [name, shape] : testsupport::projector_shapes()) {
    for (int k = 2; k <= 4; ++k) {
      CAPTURE(name);
      CAPTURE(k);
      const Element el(shape, k);
      const Eigen::VectorXd norms = el.mass_k().diagonal().cwiseSqrt();
      const Eigen::MatrixXd id =
          Eigen::MatrixXd::Identity(el.dim_pk(), el.dim_pk());
      auto weighted_defect = [&](const Eigen::MatrixXd& projector) {
        const Eigen::MatrixXd defect = projector * el.monomial_dofs() - id;
        return (norms.asDiagonal() * defect *
                norms.cwiseInverse().asDiagonal())
            .cwiseAbs()
            .maxCoeff();
      };
      for (ConstraintMode mode : admissible_modes(k)) {
        const LocalProjectors& proj = el.projectors(mode);
        CHECK(weighted_defect(proj.pi_delta) < 1e-11);
        CHECK(weighted_defect(proj.pi0_k) < 1e-11);
      }
    }
  }
}

TEST_CASE("projection is idempotent in DOF space") {
  const Element el(testsupport::random_pentagon(), 3);
  const Eigen::MatrixXd P = el.projectors(ConstraintMode::Boundary).pi_delta_dof;
  CHECK((P * P - P).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("volume-mean constraints need k >= 4") {
  const Element el(testsupport::unit_square_cell(), 2);
  CHECK_THROWS_AS(el.projectors(ConstraintMode::VolumeMean), Error);
}

TEST_CASE("L2 projector properties") {
  // k = 2,3: pi0 equals the energy projector entry-wise
  for (int k = 2; k <= 3; ++k) {
    const Element el(testsupport::random_hexagon(), k);
    const LocalProjectors& proj = el.projectors(ConstraintMode::Boundary);
    CHECK((proj.pi0_k - proj.pi_delta).cwiseAbs().maxCoeff() == 0.0);
    CHECK(proj.pi0_km4.rows() == 0);
  }

  // k = 4: moments of the projection against constants equal the moment DOFs
  const Element el(testsupport::random_pentagon(), 4);
  const LocalProjectors& proj = el.projectors(ConstraintMode::Boundary);
  const Eigen::VectorXd dofs = testsupport::random_vector(el.n_dofs(), 4u);
  const Eigen::VectorXd coeffs = proj.pi0_k * dofs;
  const double integral = el.mass_k().row(0).dot(coeffs); // int of pi0 v
  const double expected =
      el.geometry().area * dofs[el.layout().interior_moment(0)];
  CHECK(integral == doctest::Approx(expected).epsilon(1e-11));

  // pi0_km4 recovers the interior moment map exactly
  const Eigen::VectorXd rho = proj.pi0_km4 * dofs;
  CHECK(rho[0] == doctest::Approx(dofs[el.layout().interior_moment(0)])
                      .epsilon(1e-12));
}

TEST_CASE("stabilization matrices are symmetric PSD and annihilate P_k") {
  for (int k = 2; k <= 4; ++k) {
    const Element el(testsupport::random_hexagon(), k);
    const LocalProjectors& proj = el.projectors(ConstraintMode::Boundary);
    const Eigen::MatrixXd filter =
        Eigen::MatrixXd::Identity(el.n_dofs(), el.n_dofs()) -
        proj.pi_delta_dof;
    for (StabVariant variant : kAllVariants) {
      CAPTURE(k);
      CAPTURE(to_string(variant));
      const Eigen::MatrixXd S = el.stabilization(variant);
      CHECK((S - S.transpose()).cwiseAbs().maxCoeff() <
            1e-12 * S.cwiseAbs().maxCoeff());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
      CHECK(es.eigenvalues().minCoeff() >
            -1e-10 * es.eigenvalues().maxCoeff());

      const Eigen::MatrixXd Ks = filter.transpose() * S * filter;
      const Eigen::MatrixXd on_polys = Ks * el.monomial_dofs();
      CHECK(on_polys.cwiseAbs().maxCoeff() <
            1e-10 * (1.0 + Ks.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("local stiffness: consistency identity and kernel") {
  for (const auto& [name, shape] : testsupport::projector_shapes()) {
    for (int k = 2; k <= 4; ++k) {
      CAPTURE(name);
      CAPTURE(k);
      const Element el(shape, k);
      const LocalMatrices lm =
          el.local_stiffness(ConstraintMode::Boundary, StabVariant::Dof);

      // (DOFs of p)^T K_c (DOFs of q) = energy pairing of p and q, up to
      // 1e-11 relative plus the rounding floor of evaluating the quadratic
      // form through the assembled matrix (visible on anisotropic cells,
      // where K_c carries 1/rho^4-sized entries).
      const Eigen::MatrixXd D = el.monomial_dofs();
      const Eigen::MatrixXd pairing = D.transpose() * lm.consistency * D;
      const double kc_scale = lm.consistency.cwiseAbs().maxCoeff();
      double scale = 0.0;
      for (int p = 0; p < el.dim_pk(); ++p)
        scale = std::max(scale, std::abs(energy_pairing_oracle(el, p, p)));
      for (int p = 0; p < el.dim_pk(); ++p)
        for (int q = p; q < el.dim_pk(); ++q) {
          const double floor =
              100.0 * std::numeric_limits<double>::epsilon() * kc_scale *
              D.col(p).norm() * D.col(q).norm();
          CHECK(std::abs(pairing(p, q) - energy_pairing_oracle(el, p, q)) <
                1e-11 * scale + floor);
        }

      // kernel is exactly the DOFs of {1, x, y}
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(lm.stiffness);
      const Eigen::VectorXd sv = svd.singularValues();
      int small = 0;
      for (int i = 0; i < sv.size(); ++i)
        if (sv[i] < 1e-9 * sv[0]) ++small;
      CHECK(small == 3);
      const Eigen::MatrixXd affine_dofs = D.leftCols(3);
      CHECK((lm.stiffness * affine_dofs).cwiseAbs().maxCoeff() <
            1e-10 * sv[0]);
    }
  }
}

TEST_CASE("stiffness acts on polynomials through the consistency part") {
  const Element el(testsupport::unit_square_cell(), 3);
  const LocalMatrices lm =
      el.local_stiffness(ConstraintMode::Boundary, StabVariant::BoundaryTn);
  const Eigen::MatrixXd D = el.monomial_dofs();
  CHECK(((lm.stiffness - lm.consistency) * D).cwiseAbs().maxCoeff() <
        1e-10 * lm.stiffness.cwiseAbs().maxCoeff());
}

TEST_CASE("local load") {
  for (int k : {2, 4}) {
    CAPTURE(k);
    const Element el(testsupport::random_pentagon(), k);
    const Eigen::VectorXd zero =
        el.local_load([](const Vec2&) { return 0.0; },
                      ConstraintMode::Boundary);
    CHECK(zero.cwiseAbs().maxCoeff() == 0.0);

    // f = 1: the load pairing equals the integral of the projected function
    const Eigen::VectorXd ones =
        el.local_load([](const Vec2&) { return 1.0; },
                      ConstraintMode::Boundary);
    const Eigen::VectorXd dofs = testsupport::random_vector(el.n_dofs(), 11u);
    const LocalProjectors& proj = el.projectors(ConstraintMode::Boundary);
    const double via_load = ones.dot(dofs);
    const double via_projection =
        el.mass_k().row(0).dot(proj.pi0_k * dofs);
    CHECK(via_load == doctest::Approx(via_projection).epsilon(1e-11));
  }

  // k = 4 with constant f: pairing reduces to the interior moment identity
  const Element el(testsupport::random_hexagon(), 4);
  const double c = 3.25;
  const Eigen::VectorXd floc = el.local_load(
      [c](const Vec2&) { return c; }, ConstraintMode::Boundary);
  const Eigen::VectorXd dofs = testsupport::random_vector(el.n_dofs(), 12u);
  const double expected =
      el.geometry().area * c * dofs[el.layout().interior_moment(0)];
  CHECK(floc.dot(dofs) == doctest::Approx(expected).epsilon(1e-11));
}

TEST_CASE("semi-norm") {
  const Element el(testsupport::unit_square_cell(), 2);
  CHECK(el.semi_norm(Eigen::VectorXd::Zero(el.n_dofs())) == 0.0);

  // v = 1: no interior term at k = 2, boundary value term h * perimeter
  const Eigen::VectorXd ones = el.dofs_of(
      [](const Vec2&) { return 1.0; }, [](const Vec2&) { return Vec2(0, 0); });
  CHECK(el.semi_norm(ones) ==
        doctest::Approx(std::sqrt(std::sqrt(2.0) * 4.0)).epsilon(1e-12));
}

TEST_CASE("semi-norm scaling consistency") {
  // v_lambda(x) = v(x/lambda) on the scaled cell: every addend of the squared
  // semi-norm picks up exactly lambda^2.
  const double lambda = 3.5;
  auto v = [](const Vec2& p) { return 0.4 + 1.3 * p.x() - 0.6 * p.y(); };
  auto gv = [](const Vec2&) { return Vec2(1.3, -0.6); };
  auto v_scaled = [&](const Vec2& p) { return v(p / lambda); };
  auto gv_scaled = [&](const Vec2& p) -> Vec2 { return gv(p / lambda) / lambda; };

  for (int k : {2, 4}) {
    CAPTURE(k);
    const std::vector<Vec2> base = testsupport::random_pentagon();
    std::vector<Vec2> scaled = base;
    for (Vec2& p : scaled) p *= lambda;
    const Element el(base, k), els(scaled, k);
    const double a = el.semi_norm(el.dofs_of(v, gv));
    const double b = els.semi_norm(els.dofs_of(v_scaled, gv_scaled));
    CHECK(b == doctest::Approx(lambda * a).epsilon(1e-11));
  }
}

TEST_CASE("stabilization variants stay spectrally comparable under refinement") {
  auto grid_cell = [](int n) {
    std::vector<Vec2> cell = testsupport::unit_square_cell();
    for (Vec2& p : cell) p /= n;
    return cell;
  };
  for (StabVariant other : {StabVariant::BoundaryN, StabVariant::BoundaryTn}) {
    CAPTURE(to_string(other));
    const Element coarse(grid_cell(4), 2), fine(grid_cell(16), 2);
    const auto [lo4, hi4] = stabilization_spread(coarse, StabVariant::Dof,
                                                 other, ConstraintMode::Boundary);
    const auto [lo16, hi16] = stabilization_spread(fine, StabVariant::Dof,
                                                   other, ConstraintMode::Boundary);
    CHECK(lo4 > 0.0);
    CHECK(lo16 > 0.0);
    CHECK(std::max(lo4 / lo16, lo16 / lo4) < 2.0);
    CHECK(std::max(hi4 / hi16, hi16 / hi4) < 2.0);
  }
}

TEST_CASE("non-star-shaped cells cannot build elements") {
  CHECK_THROWS_AS(Element(testsupport::comb_polygon(), 2), MeshError);
}
