#include "vem/system.hpp"

#include <algorithm>
#include <sstream>

#include "vem/errors.hpp"

namespace vem {

GlobalDofMap GlobalDofMap::build(const PolygonalMesh& mesh, int k) {
  const DofLayout probe = DofLayout::make(k, 3);
  GlobalDofMap map;
  map.k = k;
  map.per_edge = probe.per_edge();
  map.per_cell = probe.interior_count();

  const int nv = mesh.n_vertices();
  const int ne = mesh.n_edges();
  const int vertex_dofs = 3 * nv;
  const int edge_dofs = ne * map.per_edge;
  map.n_total = vertex_dofs + edge_dofs + mesh.n_cells() * map.per_cell;

  map.cell_to_global.resize(mesh.n_cells());
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto& cell = mesh.cells[c];
    const int m = static_cast<int>(cell.size());
    std::vector<int>& loc = map.cell_to_global[c];
    loc.reserve(3 * m + m * map.per_edge + map.per_cell);
    for (int i = 0; i < m; ++i) {
      loc.push_back(3 * cell[i]);
      loc.push_back(3 * cell[i] + 1);
      loc.push_back(3 * cell[i] + 2);
    }
    for (int i = 0; i < m; ++i) {
      const int e = mesh.cell_edges[c][i];
      for (int j = 0; j < map.per_edge; ++j)
        loc.push_back(vertex_dofs + e * map.per_edge + j);
    }
    for (int j = 0; j < map.per_cell; ++j)
      loc.push_back(vertex_dofs + edge_dofs + c * map.per_cell + j);
  }

  map.constrained.assign(map.n_total, false);
  for (int v = 0; v < nv; ++v)
    if (mesh.boundary_vertex[v])
      for (int j = 0; j < 3; ++j) map.constrained[3 * v + j] = true;
  for (int e = 0; e < ne; ++e)
    if (mesh.boundary_edge[e])
      for (int j = 0; j < map.per_edge; ++j)
        map.constrained[vertex_dofs + e * map.per_edge + j] = true;
  return map;
}

int GlobalDofMap::n_constrained() const {
  return static_cast<int>(
      std::count(constrained.begin(), constrained.end(), true));
}

GlobalSystem assemble(const PolygonalMesh& mesh, const AssemblyOptions& options,
                      const std::function<double(const Vec2&)>& f) {
  GlobalSystem sys;
  sys.dofs = GlobalDofMap::build(mesh, options.k);
  sys.rhs = Eigen::VectorXd::Zero(sys.dofs.n_total);

  std::vector<Eigen::Triplet<double>> triplets;
  // cells are accumulated in ascending index order for reproducibility
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const Element element(mesh, c, options.k);
    const LocalMatrices local =
        element.local_stiffness(options.constraints, options.stab);
    const Eigen::VectorXd floc = element.local_load(f, options.constraints);
    const std::vector<int>& loc = sys.dofs.cell_to_global[c];
    const int n = element.n_dofs();
    for (int i = 0; i < n; ++i) {
      sys.rhs[loc[i]] += floc[i];
      for (int j = 0; j < n; ++j)
        triplets.emplace_back(loc[i], loc[j], local.stiffness(i, j));
    }
  }
  sys.matrix.resize(sys.dofs.n_total, sys.dofs.n_total);
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  return sys;
}

ReducedSystem apply_clamped_bc(const GlobalSystem& system,
                               const Eigen::VectorXd* lifting) {
  const int n = system.dofs.n_total;
  if (lifting && lifting->size() != n)
    throw Error("lifting vector length mismatch");

  ReducedSystem red;
  red.full_values = Eigen::VectorXd::Zero(n);
  std::vector<int> to_free(n, -1);
  for (int i = 0; i < n; ++i) {
    if (system.dofs.constrained[i]) {
      if (lifting) red.full_values[i] = (*lifting)[i];
    } else {
      to_free[i] = static_cast<int>(red.free_index.size());
      red.free_index.push_back(i);
    }
  }
  const int nf = static_cast<int>(red.free_index.size());

  red.rhs.resize(nf);
  for (int i = 0; i < nf; ++i) red.rhs[i] = system.rhs[red.free_index[i]];

  std::vector<Eigen::Triplet<double>> triplets;
  for (int col = 0; col < system.matrix.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(system.matrix, col); it;
         ++it) {
      const int fi = to_free[it.row()];
      const int fj = to_free[it.col()];
      if (fi >= 0 && fj >= 0) {
        triplets.emplace_back(fi, fj, it.value());
      } else if (fi >= 0 && fj < 0) {
        red.rhs[fi] -= it.value() * red.full_values[it.col()];
      }
    }
  }
  red.matrix.resize(nf, nf);
  red.matrix.setFromTriplets(triplets.begin(), triplets.end());
  return red;
}

SolveResult solve(const ReducedSystem& system, const SolverOptions& options) {
  SolveResult result;
  result.solution = system.full_values;
  const int nf = static_cast<int>(system.free_index.size());
  if (nf == 0) return result;

  // Symmetric Jacobi scaling keeps the raw DOF scaling of the element
  // matrices out of the factorization.
  Eigen::VectorXd scale = Eigen::VectorXd::Ones(nf);
  if (options.jacobi_scaling) {
    const Eigen::VectorXd diag = system.matrix.diagonal();
    for (int i = 0; i < nf; ++i) {
      if (!(diag[i] > 0.0)) {
        std::ostringstream os;
        os << "matrix is not positive definite: nonpositive diagonal at "
              "reduced dof "
           << i;
        throw SolverError(os.str());
      }
      scale[i] = 1.0 / std::sqrt(diag[i]);
    }
  }
  const Eigen::SparseMatrix<double> scaled =
      scale.asDiagonal() * system.matrix * scale.asDiagonal();
  const Eigen::VectorXd scaled_rhs = scale.asDiagonal() * system.rhs;

  Eigen::VectorXd y(nf);
  if (options.kind == SolverKind::Direct) {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(scaled);
    if (ldlt.info() != Eigen::Success)
      throw SolverError("sparse factorization failed");
    const Eigen::VectorXd& d = ldlt.vectorD();
    for (int i = 0; i < d.size(); ++i)
      if (!(d[i] > 0.0)) {
        std::ostringstream os;
        os << "matrix is not positive definite: pivot " << i << " = " << d[i];
        throw SolverError(os.str());
      }
    y = ldlt.solve(scaled_rhs);
  } else {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>,
                             Eigen::Lower | Eigen::Upper>
        cg(scaled);
    cg.setTolerance(options.cg_tolerance);
    cg.setMaxIterations(10 * static_cast<long>(nf));
    y = cg.solve(scaled_rhs);
    result.iterations = static_cast<int>(cg.iterations());
    if (cg.info() != Eigen::Success)
      throw SolverError("conjugate gradients did not converge");
  }

  const Eigen::VectorXd x = scale.asDiagonal() * y;
  const double rhs_norm = system.rhs.norm();
  result.residual = (system.matrix * x - system.rhs).norm() /
                    (rhs_norm > 0.0 ? rhs_norm : 1.0);

  for (int i = 0; i < nf; ++i)
    result.solution[system.free_index[i]] = x[i];
  return result;
}

} // namespace vem
