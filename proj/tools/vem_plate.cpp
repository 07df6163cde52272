// Command-line driver: solve single cases, run convergence studies, and audit
// mesh shape regularity.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vem/errors.hpp"
#include "vem/mesh.hpp"
#include "vem/study.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitMesh = 2;
constexpr int kExitSolver = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw vem::MeshError("cannot open mesh file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void print_regularity(const vem::RegularityReport& report, std::ostream& os) {
  os << std::setw(8) << "cell" << std::setw(14) << "rho_edge" << std::setw(14)
     << "rho_star" << std::setw(14) << "star" << "\n";
  for (const auto& cell : report.cells) {
    os << std::setw(8) << cell.cell << std::fixed << std::setprecision(6)
       << std::setw(14) << cell.rho_edge << std::setw(14) << cell.rho_star
       << std::setw(14) << (cell.star_shaped ? "yes" : "NO") << "\n";
  }
  os << "mesh-wide rho = " << report.rho << " (threshold " << report.threshold
     << "): " << (report.pass ? "PASS" : "FAIL") << "\n";
}

struct CommonOptions {
  std::string mesh_path;
  std::string family = "uniform-quad";
  int n = 8;
  int k = 2;
  std::string case_name = "sinsq";
  std::string stab = "dof";
  std::string constraints = "boundary";
  std::string csv_path;
  double rho = 1e-3;
};

vem::PolygonalMesh obtain_mesh(const CommonOptions& opt) {
  if (!opt.mesh_path.empty())
    return vem::load_mesh(read_file(opt.mesh_path));
  return vem::generate_mesh(vem::mesh_family_from_string(opt.family), opt.n);
}

vem::StudyOptions study_options(const CommonOptions& opt) {
  vem::StudyOptions options;
  options.assembly.k = opt.k;
  options.assembly.stab = vem::stab_variant_from_string(opt.stab);
  options.assembly.constraints =
      vem::constraint_mode_from_string(opt.constraints);
  return options;
}

int run_solve(const CommonOptions& opt) {
  const vem::PolygonalMesh mesh = obtain_mesh(opt);
  const vem::RegularityReport report = vem::check_regularity(mesh, opt.rho);
  if (!report.pass) {
    print_regularity(report, std::cerr);
    std::cerr << "mesh fails the shape-regularity audit\n";
    return kExitMesh;
  }

  const vem::ManufacturedCase data = vem::manufactured_case(opt.case_name, opt.k);
  const vem::StudyOptions options = study_options(opt);
  vem::SolveResult details;
  const vem::ErrorNorms errors =
      vem::solve_and_measure(mesh, data, options, &details);

  std::cout << "case " << data.name << ", k = " << opt.k << ", cells = "
            << mesh.n_cells() << ", h = " << vem::mesh_size(mesh) << "\n";
  std::cout << "solver residual " << details.residual;
  if (details.iterations > 0)
    std::cout << " (" << details.iterations << " cg iterations)";
  std::cout << "\n";
  std::cout << std::scientific << std::setprecision(6)
            << "H2(PiDelta) " << errors.h2_pd << "  H1(PiDelta) "
            << errors.h1_pd << "  L2(PiDelta) " << errors.l2_pd << "\n"
            << "H2(Pi0)     " << errors.h2_p0 << "  H1(Pi0)     "
            << errors.h1_p0 << "  L2(Pi0)     " << errors.l2_p0 << "\n";

  if (!opt.csv_path.empty()) {
    std::ofstream csv(opt.csv_path);
    csv << "h,ndof,e_h2_pd,e_h1_pd,e_l2_pd,e_h2_p0,e_h1_p0,e_l2_p0\n"
        << std::setprecision(16) << vem::mesh_size(mesh) << ','
        << vem::GlobalDofMap::build(mesh, opt.k).n_total << ','
        << errors.h2_pd << ',' << errors.h1_pd << ',' << errors.l2_pd << ','
        << errors.h2_p0 << ',' << errors.h1_p0 << ',' << errors.l2_p0 << '\n';
  }
  return 0;
}

int run_converge(const CommonOptions& opt, const std::vector<int>& levels) {
  const vem::ManufacturedCase data = vem::manufactured_case(opt.case_name, opt.k);
  const vem::StudyOptions options = study_options(opt);
  const vem::ConvergenceReport report = vem::run_convergence(
      data, vem::mesh_family_from_string(opt.family), levels, opt.k, options);
  vem::print_table(std::cout, report);
  if (!opt.csv_path.empty()) {
    std::ofstream csv(opt.csv_path);
    vem::write_csv(csv, report);
  }
  return 0;
}

int run_check_mesh(const CommonOptions& opt) {
  const vem::PolygonalMesh mesh = vem::load_mesh(read_file(opt.mesh_path));
  const vem::RegularityReport report = vem::check_regularity(mesh, opt.rho);
  print_regularity(report, std::cout);
  return report.pass ? 0 : kExitMesh;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Virtual element solver for the clamped plate problem on "
               "polygonal meshes"};
  app.require_subcommand(1);

  CommonOptions opt;
  std::string levels_arg = "8,16,32";

  auto add_discretization = [&](CLI::App* cmd) {
    cmd->add_option("--k", opt.k, "polynomial order")
        ->check(CLI::IsMember({2, 3, 4}));
    cmd->add_option("--case", opt.case_name, "manufactured case")
        ->check(CLI::IsMember({"poly-k", "bump", "sinsq"}));
    cmd->add_option("--stab", opt.stab, "stabilization variant")
        ->check(CLI::IsMember({"dof", "boundary-n", "boundary-tn"}));
    cmd->add_option("--constraints", opt.constraints, "projector constraints")
        ->check(CLI::IsMember({"boundary", "volume-gradient", "volume-mean"}));
    cmd->add_option("--csv", opt.csv_path, "write results as CSV");
  };

  CLI::App* solve = app.add_subcommand("solve", "solve one discrete problem");
  solve->add_option("--mesh", opt.mesh_path, "mesh file (JSON)");
  solve->add_option("--family", opt.family, "generated mesh family")
      ->check(CLI::IsMember({"uniform-quad", "uniform-triangle",
                             "perturbed-quad"}));
  solve->add_option("--n", opt.n, "mesh level")->check(CLI::PositiveNumber);
  solve->add_option("--rho", opt.rho, "regularity threshold");
  add_discretization(solve);

  CLI::App* converge =
      app.add_subcommand("converge", "run a mesh refinement study");
  converge->add_option("--family", opt.family, "generated mesh family")
      ->check(CLI::IsMember({"uniform-quad", "uniform-triangle",
                             "perturbed-quad"}));
  converge->add_option("--levels", levels_arg,
                       "comma-separated refinement levels");
  add_discretization(converge);

  CLI::App* check =
      app.add_subcommand("check-mesh", "audit mesh shape regularity");
  check->add_option("--mesh", opt.mesh_path, "mesh file (JSON)")->required();
  check->add_option("--rho", opt.rho, "regularity threshold")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : kExitUsage;
  }

  try {
    if (solve->parsed()) return run_solve(opt);
    if (check->parsed()) return run_check_mesh(opt);

    std::vector<int> levels;
    std::stringstream ss(levels_arg);
    std::string tok;
    while (std::getline(ss, tok, ',')) levels.push_back(std::stoi(tok));
    if (levels.empty()) {
      std::cerr << "no refinement levels given\n";
      return kExitUsage;
    }
    return run_converge(opt, levels);
  } catch (const vem::MeshError& e) {
    std::cerr << "mesh error: " << e.what() << "\n";
    return kExitMesh;
  } catch (const vem::SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const vem::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
