#pragma once

#include <Eigen/Sparse>
#include <functional>
#include <optional>
#include <vector>

#include "vem/element.hpp"
#include "vem/mesh.hpp"

namespace vem {

struct AssemblyOptions {
  int k = 2;
  StabVariant stab = StabVariant::Dof;
  ConstraintMode constraints = ConstraintMode::Boundary;
};

/// Global numbering: for each vertex the (value, d/dx, d/dy) triplet, then
/// per canonical edge its moment block, then per cell its interior block.
/// Shared edge DOFs are stored once; elements already express their local
/// matrices in the canonical edge frame, so the scatter is index-only.
struct GlobalDofMap {
  int k = 2;
  int n_total = 0;
  int per_edge = 0;
  int per_cell = 0;
  std::vector<std::vector<int>> cell_to_global; // in local layout order
  std::vector<bool> constrained; // clamped boundary mask

  static GlobalDofMap build(const PolygonalMesh& mesh, int k);

  int n_constrained() const;
  int n_free() const { return n_total - n_constrained(); }
};

struct GlobalSystem {
  GlobalDofMap dofs;
  Eigen::SparseMatrix<double> matrix; // full size, symmetric
  Eigen::VectorXd rhs;
};

GlobalSystem assemble(const PolygonalMesh& mesh, const AssemblyOptions& options,
                      const std::function<double(const Vec2&)>& f);

/// System after eliminating the clamped DOFs. `full_values` carries the
/// lifting on constrained DOFs (zero if no lifting was given).
struct ReducedSystem {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
  std::vector<int> free_index;
  Eigen::VectorXd full_values;
};

ReducedSystem apply_clamped_bc(const GlobalSystem& system,
                               const Eigen::VectorXd* lifting = nullptr);

enum class SolverKind { Direct, ConjugateGradient };

struct SolverOptions {
  SolverKind kind = SolverKind::Direct;
  bool jacobi_scaling = true;
  double cg_tolerance = 1e-10;
};

struct SolveResult {
  Eigen::VectorXd solution; // full length, constrained values re-inserted
  int iterations = 0;       // zero for the direct solver
  double residual = 0.0;    // relative residual of the reduced system
};

SolveResult solve(const ReducedSystem& system,
                  const SolverOptions& options = {});

} // namespace vem
