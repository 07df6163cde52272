#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "vem/element.hpp"
#include "vem/study.hpp"
#include "vem/system.hpp"

namespace {

std::vector<vem::Vec2> regular_polygon(int n) {
  std::vector<vem::Vec2> poly;
  for (int i = 0; i < n; ++i) {
    const double th = 2.0 * M_PI * i / n;
    poly.emplace_back(std::cos(th), std::sin(th));
  }
  return poly;
}

void LocalStiffness(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const int nv = static_cast<int>(state.range(1));
  const std::vector<vem::Vec2> poly = regular_polygon(nv);
  for (auto _ : state) {
    const vem::Element element(poly, k);
    const vem::LocalMatrices lm = element.local_stiffness(
        vem::ConstraintMode::Boundary, vem::StabVariant::Dof);
    benchmark::DoNotOptimize(lm.stiffness.norm());
  }
}
BENCHMARK(LocalStiffness)
    ->ArgsProduct({{2, 3, 4}, {4, 8}})
    ->Unit(benchmark::kMicrosecond);

void PolygonQuadrature(benchmark::State& state) {
  const int degree = static_cast<int>(state.range(0));
  const std::vector<vem::Vec2> poly = regular_polygon(6);
  const vem::CellGeometry geom = vem::cell_geometry(poly);
  for (auto _ : state) {
    const vem::QuadratureRule rule =
        vem::polygon_rule(poly, geom.star_center, degree);
    benchmark::DoNotOptimize(rule.weights.sum());
  }
}
BENCHMARK(PolygonQuadrature)->Arg(4)->Arg(8)->Arg(12);

void AssembleAndSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const vem::PolygonalMesh mesh =
      vem::generate_mesh(vem::MeshFamily::UniformQuad, n);
  const vem::ManufacturedCase data = vem::manufactured_case("sinsq", 2);
  vem::AssemblyOptions options;
  for (auto _ : state) {
    const vem::GlobalSystem sys = vem::assemble(mesh, options, data.f);
    const vem::SolveResult result = vem::solve(vem::apply_clamped_bc(sys));
    benchmark::DoNotOptimize(result.solution.norm());
  }
  state.SetComplexityN(mesh.n_cells());
}
BENCHMARK(AssembleAndSolve)
    ->RangeMultiplier(2)
    ->Range(8, 32)
    ->Complexity()
    ->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
