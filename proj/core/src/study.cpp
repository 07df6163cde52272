#include "vem/study.hpp"

#include <cmath>
#include <iomanip>
#include <memory>
#include <ostream>
#include <random>
#include <sstream>

#include "vem/errors.hpp"

namespace vem {

namespace {

constexpr double kPi = 3.14159265358979323846;

ManufacturedCase make_poly_case(int k) {
  // Seeded random polynomial of degree k in the unscaled monomial basis.
  auto poly = std::make_shared<CellPoly>(
      CellPoly::zero(CellFrame{Vec2::Zero(), 1.0}, k));
  std::mt19937_64 rng(0x9e3779b9u + static_cast<std::uint64_t>(k));
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  for (int j = 0; j < poly->coeffs.size(); ++j) poly->coeffs[j] = coeff(rng);

  auto hess = std::make_shared<HessianQuad>(hessian(*poly));
  auto lap2 = std::make_shared<CellPoly>(bilaplacian(*poly));

  ManufacturedCase c;
  c.name = "poly-" + std::to_string(k);
  c.regularity = "polynomial (C-infinity), inhomogeneous boundary data";
  c.u = [poly](const Vec2& x) { return poly->value(x); };
  c.grad_u = [poly](const Vec2& x) { return poly->gradient(x); };
  c.hess_u = [hess](const Vec2& x) {
    Eigen::Matrix2d H;
    H(0, 0) = hess->u11.value(x);
    H(1, 1) = hess->u22.value(x);
    H(0, 1) = H(1, 0) = hess->u12.value(x);
    return H;
  };
  c.f = [lap2](const Vec2& x) { return lap2->value(x); };
  return c;
}

ManufacturedCase make_bump_case() {
  auto g = [](double t) { return t * t * (1.0 - t) * (1.0 - t); };
  auto dg = [](double t) { return 2.0 * t - 6.0 * t * t + 4.0 * t * t * t; };
  auto ddg = [](double t) { return 2.0 - 12.0 * t + 12.0 * t * t; };

  ManufacturedCase c;
  c.name = "bump";
  c.regularity = "polynomial of degree 8, u in H^2_0 of the unit square";
  c.u = [=](const Vec2& x) { return g(x.x()) * g(x.y()); };
  c.grad_u = [=](const Vec2& x) {
    return Vec2(dg(x.x()) * g(x.y()), g(x.x()) * dg(x.y()));
  };
  c.hess_u = [=](const Vec2& x) {
    Eigen::Matrix2d H;
    H(0, 0) = ddg(x.x()) * g(x.y());
    H(1, 1) = g(x.x()) * ddg(x.y());
    H(0, 1) = H(1, 0) = dg(x.x()) * dg(x.y());
    return H;
  };
  c.f = [=](const Vec2& x) {
    return 24.0 * g(x.y()) + 2.0 * ddg(x.x()) * ddg(x.y()) + 24.0 * g(x.x());
  };
  return c;
}

ManufacturedCase make_sinsq_case() {
  auto S = [](double t) {
    const double s = std::sin(kPi * t);
    return s * s;
  };
  auto dS = [](double t) { return kPi * std::sin(2.0 * kPi * t); };
  auto ddS = [](double t) {
    return 2.0 * kPi * kPi * std::cos(2.0 * kPi * t);
  };
  auto ddddS = [](double t) {
    return -8.0 * kPi * kPi * kPi * kPi * std::cos(2.0 * kPi * t);
  };

  ManufacturedCase c;
  c.name = "sinsq";
  c.regularity = "analytic, u in H^2_0 of the unit square";
  c.u = [=](const Vec2& x) { return S(x.x()) * S(x.y()); };
  c.grad_u = [=](const Vec2& x) {
    return Vec2(dS(x.x()) * S(x.y()), S(x.x()) * dS(x.y()));
  };
  c.hess_u = [=](const Vec2& x) {
    Eigen::Matrix2d H;
    H(0, 0) = ddS(x.x()) * S(x.y());
    H(1, 1) = S(x.x()) * ddS(x.y());
    H(0, 1) = H(1, 0) = dS(x.x()) * dS(x.y());
    return H;
  };
  c.f = [=](const Vec2& x) {
    return ddddS(x.x()) * S(x.y()) + 2.0 * ddS(x.x()) * ddS(x.y()) +
           S(x.x()) * ddddS(x.y());
  };
  return c;
}

} // namespace

ManufacturedCase manufactured_case(const std::string& name, int k) {
  if (name == "poly-k" || name == "poly") return make_poly_case(k);
  if (name == "bump") return make_bump_case();
  if (name == "sinsq") return make_sinsq_case();
  throw Error("unknown manufactured case: " + name);
}

std::vector<std::string> manufactured_case_names() {
  return {"poly-k", "bump", "sinsq"};
}

Eigen::VectorXd interpolate_dofs(const PolygonalMesh& mesh, int k,
                                 const ManufacturedCase& data) {
  const GlobalDofMap map = GlobalDofMap::build(mesh, k);
  Eigen::VectorXd dofs = Eigen::VectorXd::Zero(map.n_total);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const Element element(mesh, c, k);
    const Eigen::VectorXd local = element.dofs_of(data.u, data.grad_u);
    const std::vector<int>& loc = map.cell_to_global[c];
    // shared DOFs are identical from either side; overwrite is fine
    for (int i = 0; i < element.n_dofs(); ++i) dofs[loc[i]] = local[i];
  }
  return dofs;
}

double ErrorNorms::max() const {
  return std::max({h2_pd, h1_pd, l2_pd, h2_p0, h1_p0, l2_p0});
}

ErrorNorms error_norms(const PolygonalMesh& mesh, int k,
                       const Eigen::VectorXd& dofs,
                       const ManufacturedCase& data, ConstraintMode mode) {
  ErrorNorms acc;
  double h2_pd = 0, h1_pd = 0, l2_pd = 0, h2_p0 = 0, h1_p0 = 0, l2_p0 = 0;
  const GlobalDofMap map = GlobalDofMap::build(mesh, k);

  for (int c = 0; c < mesh.n_cells(); ++c) {
    const Element element(mesh, c, k);
    const std::vector<int>& loc = map.cell_to_global[c];
    Eigen::VectorXd local(element.n_dofs());
    for (int i = 0; i < element.n_dofs(); ++i) local[i] = dofs[loc[i]];

    const LocalProjectors& proj = element.projectors(mode);
    const QuadratureRule& quad = element.cell_rule_hi();
    const CellBasis basis{element.frame(), k};
    const Eigen::MatrixXd V = eval_basis(basis, quad.points);
    const Eigen::MatrixXd Vx = eval_basis_dx(basis, quad.points);
    const Eigen::MatrixXd Vy = eval_basis_dy(basis, quad.points);
    const CellBasis basis2{element.frame(), std::max(k - 2, 0)};
    const Eigen::MatrixXd V2 = eval_basis(basis2, quad.points);

    auto accumulate = [&](const Eigen::VectorXd& coeffs, double& e2,
                          double& e1, double& e0) {
      const CellPoly p = element.make_poly(coeffs, k);
      const HessianQuad H = hessian(p);
      const Eigen::VectorXd pv = V * coeffs;
      const Eigen::VectorXd px = Vx * coeffs;
      const Eigen::VectorXd py = Vy * coeffs;
      const Eigen::VectorXd pxx = V2 * H.u11.coeffs;
      const Eigen::VectorXd pyy = V2 * H.u22.coeffs;
      const Eigen::VectorXd pxy = V2 * H.u12.coeffs;
      for (int q = 0; q < quad.weights.size(); ++q) {
        const Vec2& x = quad.points[q];
        const double w = quad.weights[q];
        const double du = data.u(x) - pv[q];
        const Vec2 dg = data.grad_u(x) - Vec2(px[q], py[q]);
        const Eigen::Matrix2d Hu = data.hess_u(x);
        const double dxx = Hu(0, 0) - pxx[q];
        const double dyy = Hu(1, 1) - pyy[q];
        const double dxy = Hu(0, 1) - pxy[q];
        e0 += w * du * du;
        e1 += w * dg.squaredNorm();
        e2 += w * (dxx * dxx + dyy * dyy + 2.0 * dxy * dxy);
      }
    };

    accumulate(proj.pi_delta * local, h2_pd, h1_pd, l2_pd);
    accumulate(proj.pi0_k * local, h2_p0, h1_p0, l2_p0);
  }

  acc.h2_pd = std::sqrt(h2_pd);
  acc.h1_pd = std::sqrt(h1_pd);
  acc.l2_pd = std::sqrt(l2_pd);
  acc.h2_p0 = std::sqrt(h2_p0);
  acc.h1_p0 = std::sqrt(h1_p0);
  acc.l2_p0 = std::sqrt(l2_p0);
  return acc;
}

ErrorNorms solve_and_measure(const PolygonalMesh& mesh,
                             const ManufacturedCase& data,
                             const StudyOptions& options,
                             SolveResult* details) {
  const GlobalSystem system = assemble(mesh, options.assembly, data.f);
  const Eigen::VectorXd lifting =
      interpolate_dofs(mesh, options.assembly.k, data);
  const ReducedSystem reduced = apply_clamped_bc(system, &lifting);
  SolveResult result = solve(reduced, options.solver);
  if (details) *details = result;
  return error_norms(mesh, options.assembly.k, result.solution, data,
                     options.assembly.constraints);
}

namespace {

double eoc_of(double e_coarse, double e_fine, double h_coarse, double h_fine) {
  if (e_coarse <= 0.0 || e_fine <= 0.0) return 0.0;
  return std::log(e_coarse / e_fine) / std::log(h_coarse / h_fine);
}

} // namespace

ConvergenceReport run_convergence(const ManufacturedCase& data,
                                  MeshFamily family,
                                  const std::vector<int>& levels, int k,
                                  const StudyOptions& options) {
  ConvergenceReport report;
  report.case_name = data.name;
  report.k = k;
  switch (family) {
    case MeshFamily::UniformQuad: report.family = "uniform-quad"; break;
    case MeshFamily::UniformTriangle: report.family = "uniform-triangle"; break;
    case MeshFamily::PerturbedQuad: report.family = "perturbed-quad"; break;
  }

  double u_scale = 0.0;
  for (int n : levels) {
    const PolygonalMesh mesh = generate_mesh(family, n);
    ConvergenceLevel level;
    level.n = n;
    level.h = mesh_size(mesh);
    level.n_dofs = GlobalDofMap::build(mesh, k).n_total;
    level.errors = solve_and_measure(mesh, data, options);
    report.levels.push_back(level);
    for (const Vec2& v : mesh.vertices)
      u_scale = std::max(u_scale, std::abs(data.u(v)));
  }

  for (std::size_t i = 0; i + 1 < report.levels.size(); ++i) {
    const ConvergenceLevel& a = report.levels[i];
    const ConvergenceLevel& b = report.levels[i + 1];
    ErrorNorms r;
    r.h2_pd = eoc_of(a.errors.h2_pd, b.errors.h2_pd, a.h, b.h);
    r.h1_pd = eoc_of(a.errors.h1_pd, b.errors.h1_pd, a.h, b.h);
    r.l2_pd = eoc_of(a.errors.l2_pd, b.errors.l2_pd, a.h, b.h);
    r.h2_p0 = eoc_of(a.errors.h2_p0, b.errors.h2_p0, a.h, b.h);
    r.h1_p0 = eoc_of(a.errors.h1_p0, b.errors.h1_p0, a.h, b.h);
    r.l2_p0 = eoc_of(a.errors.l2_p0, b.errors.l2_p0, a.h, b.h);
    report.eoc.push_back(r);
  }

  if (!report.levels.empty() &&
      report.levels.back().errors.max() <= 1e-9 * (1.0 + u_scale))
    report.exact = true;
  return report;
}

void write_csv(std::ostream& os, const ConvergenceReport& report) {
  os << "h,ndof,e_h2_pd,e_h1_pd,e_l2_pd,e_h2_p0,e_h1_p0,e_l2_p0,"
     << "eoc_h2_pd,eoc_h1_pd,eoc_l2_pd,eoc_h2_p0,eoc_h1_p0,eoc_l2_p0\n";
  os << std::setprecision(16);
  for (std::size_t i = 0; i < report.levels.size(); ++i) {
    const ConvergenceLevel& l = report.levels[i];
    os << l.h << ',' << l.n_dofs << ',' << l.errors.h2_pd << ','
       << l.errors.h1_pd << ',' << l.errors.l2_pd << ',' << l.errors.h2_p0
       << ',' << l.errors.h1_p0 << ',' << l.errors.l2_p0;
    if (i == 0) {
      os << ",,,,,,";
    } else {
      const ErrorNorms& r = report.eoc[i - 1];
      os << ',' << r.h2_pd << ',' << r.h1_pd << ',' << r.l2_pd << ','
         << r.h2_p0 << ',' << r.h1_p0 << ',' << r.l2_p0;
    }
    os << '\n';
  }
}

void print_table(std::ostream& os, const ConvergenceReport& report) {
  os << "case " << report.case_name << ", family " << report.family
     << ", k = " << report.k << "\n";
  os << std::setw(10) << "h" << std::setw(8) << "ndof"            //
     << std::setw(12) << "H2(PiD)" << std::setw(7) << "eoc"       //
     << std::setw(12) << "H1(PiD)" << std::setw(7) << "eoc"       //
     << std::setw(12) << "L2(PiD)" << std::setw(7) << "eoc"       //
     << std::setw(12) << "H2(Pi0)" << std::setw(7) << "eoc"       //
     << std::setw(12) << "H1(Pi0)" << std::setw(7) << "eoc"       //
     << std::setw(12) << "L2(Pi0)" << std::setw(7) << "eoc" << "\n";
  for (std::size_t i = 0; i < report.levels.size(); ++i) {
    const ConvergenceLevel& l = report.levels[i];
    auto eoc = [&](double ErrorNorms::* field) -> std::string {
      if (i == 0) return "-";
      std::ostringstream tmp;
      tmp << std::fixed << std::setprecision(2) << report.eoc[i - 1].*field;
      return tmp.str();
    };
    os << std::scientific << std::setprecision(2) << std::setw(10) << l.h
       << std::setw(8) << l.n_dofs                                          //
       << std::setw(12) << l.errors.h2_pd << std::setw(7) << eoc(&ErrorNorms::h2_pd)
       << std::setw(12) << l.errors.h1_pd << std::setw(7) << eoc(&ErrorNorms::h1_pd)
       << std::setw(12) << l.errors.l2_pd << std::setw(7) << eoc(&ErrorNorms::l2_pd)
       << std::setw(12) << l.errors.h2_p0 << std::setw(7) << eoc(&ErrorNorms::h2_p0)
       << std::setw(12) << l.errors.h1_p0 << std::setw(7) << eoc(&ErrorNorms::h1_p0)
       << std::setw(12) << l.errors.l2_p0 << std::setw(7) << eoc(&ErrorNorms::l2_p0)
       << "\n";
  }
  if (report.exact)
    os << "(errors at the polynomial reproduction floor; no rate measurable)\n";
}

} // namespace vem
