#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "vem/system.hpp"

namespace vem {

/// Closed-form reference solution of the clamped plate problem together with
/// its derivatives and exact load f (the bilaplacian of u).
struct ManufacturedCase {
  std::string name;
  std::string regularity; // Sobolev class of u, informational
  std::function<double(const Vec2&)> u;
  std::function<Vec2(const Vec2&)> grad_u;
  std::function<Eigen::Matrix2d(const Vec2&)> hess_u;
  std::function<double(const Vec2&)> f;
};

/// Built-in cases on the unit square: "poly-k" (seeded random polynomial of
/// degree k, needs a lifting), "bump" (x^2(1-x)^2 y^2(1-y)^2) and "sinsq"
/// ((sin pi x sin pi y)^2), the latter two with homogeneous clamped data.
ManufacturedCase manufactured_case(const std::string& name, int k);

std::vector<std::string> manufactured_case_names();

/// DOF interpolation of smooth data: vertex evaluations plus quadrature of
/// the edge and interior moments, conforming across cells by construction.
Eigen::VectorXd interpolate_dofs(const PolygonalMesh& mesh, int k,
                                 const ManufacturedCase& data);

/// The six computable errors between u and the projected discrete solution.
struct ErrorNorms {
  double h2_pd = 0.0, h1_pd = 0.0, l2_pd = 0.0; // energy projection
  double h2_p0 = 0.0, h1_p0 = 0.0, l2_p0 = 0.0; // L2 projection

  double max() const;
};

ErrorNorms error_norms(const PolygonalMesh& mesh, int k,
                       const Eigen::VectorXd& dofs,
                       const ManufacturedCase& data, ConstraintMode mode);

struct StudyOptions {
  AssemblyOptions assembly;
  SolverOptions solver;
};

struct ConvergenceLevel {
  int n = 0;
  double h = 0.0;
  int n_dofs = 0;
  ErrorNorms errors;
};

struct ConvergenceReport {
  std::string case_name;
  std::string family;
  int k = 2;
  std::vector<ConvergenceLevel> levels;
  std::vector<ErrorNorms> eoc; // one entry per consecutive level pair
  bool exact = false;          // errors at the reproduction floor
};

/// Solve the case on one mesh (lifting from the exact DOFs) and measure.
ErrorNorms solve_and_measure(const PolygonalMesh& mesh,
                             const ManufacturedCase& data,
                             const StudyOptions& options,
                             SolveResult* details = nullptr);

ConvergenceReport run_convergence(const ManufacturedCase& data,
                                  MeshFamily family,
                                  const std::vector<int>& levels, int k,
                                  const StudyOptions& options);

void write_csv(std::ostream& os, const ConvergenceReport& report);
void print_table(std::ostream& os, const ConvergenceReport& report);

} // namespace vem
