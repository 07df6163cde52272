#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "vem/errors.hpp"
#include "vem/mesh.hpp"

using namespace vem;

TEST_CASE("unit square as a single cell") {
  const PolygonalMesh mesh = load_mesh(
      R"({"vertices": [[0,0],[1,0],[1,1],[0,1]], "cells": [[0,1,2,3]]})");
  CHECK(mesh.n_cells() == 1);
  CHECK(mesh.n_edges() == 4);
  CHECK(mesh.n_vertices() == 4);
  int boundary_vertices = 0;
  for (bool b : mesh.boundary_vertex) boundary_vertices += b;
  CHECK(boundary_vertices == 4);
  for (bool b : mesh.boundary_edge) CHECK(b);
}

TEST_CASE("2x2 quad mesh counts") {
  const PolygonalMesh mesh = generate_mesh(MeshFamily::UniformQuad, 2);
  CHECK(mesh.n_cells() == 4);
  CHECK(mesh.n_edges() == 12);
  int boundary_vertices = 0;
  for (bool b : mesh.boundary_vertex) boundary_vertices += b;
  CHECK(boundary_vertices == 8);
  CHECK(mesh.n_vertices() - boundary_vertices == 1);
}

TEST_CASE("clockwise cells are normalized to CCW") {
  const PolygonalMesh mesh = load_mesh(
      R"({"vertices": [[0,0],[1,0],[1,1],[0,1]], "cells": [[0,3,2,1]]})");
  CHECK(signed_area(mesh.cell_polygon(0)) > 0.0);
}

TEST_CASE("invalid meshes are rejected") {
  CHECK_THROWS_AS(load_mesh("not json"), MeshError);
  CHECK_THROWS_AS(load_mesh(R"({"vertices": [[0,0]]})"), MeshError);
  // duplicate vertices
  CHECK_THROWS_AS(
      load_mesh(
          R"({"vertices": [[0,0],[1,0],[1,1],[1,1e-15]], "cells": [[0,1,2]]})"),
      MeshError);
  // bowtie cell
  CHECK_THROWS_AS(
      load_mesh(
          R"({"vertices": [[0,0],[1,1],[1,0],[0,1]], "cells": [[0,1,2,3]]})"),
      MeshError);
  // hanging vertex: right cell splits the shared edge, left one does not
  CHECK_THROWS_AS(
      load_mesh(R"({"vertices": [[0,0],[1,0],[1,0.5],[1,1],[0,1],[2,0],[2,1]],
                    "cells": [[0,1,3,4],[1,5,6,3,2]]})"),
      MeshError);
}

TEST_CASE("generated mesh geometry") {
  const PolygonalMesh quad = generate_mesh(MeshFamily::UniformQuad, 2);
  CHECK(mesh_size(quad) == doctest::Approx(std::sqrt(2.0) / 2.0));
  double total = 0.0;
  for (int c = 0; c < quad.n_cells(); ++c)
    total += signed_area(quad.cell_polygon(c));
  CHECK(std::abs(total - 1.0) < 1e-12);

  const PolygonalMesh tri = generate_mesh(MeshFamily::UniformTriangle, 1);
  CHECK(tri.n_cells() == 2);
  for (int c = 0; c < tri.n_cells(); ++c)
    CHECK(signed_area(tri.cell_polygon(c)) == doctest::Approx(0.5));
}

TEST_CASE("perturbed family is deterministic and valid") {
  const PolygonalMesh a = generate_mesh(MeshFamily::PerturbedQuad, 4);
  const PolygonalMesh b = generate_mesh(MeshFamily::PerturbedQuad, 4);
  REQUIRE(a.n_vertices() == b.n_vertices());
  for (int v = 0; v < a.n_vertices(); ++v)
    CHECK((a.vertices[v] - b.vertices[v]).norm() == 0.0);
  const RegularityReport report = check_regularity(a, 0.01);
  CHECK(report.pass);
  double total = 0.0;
  for (int c = 0; c < a.n_cells(); ++c)
    total += signed_area(a.cell_polygon(c));
  CHECK(std::abs(total - 1.0) < 1e-12);
}

TEST_CASE("regularity of reference shapes") {
  const CellGeometry square = cell_geometry(testsupport::unit_square_cell());
  CHECK(std::abs(square.rho_edge - 1.0 / std::sqrt(2.0)) < 1e-9);
  CHECK(std::abs(square.rho_star - 0.5 / std::sqrt(2.0)) < 1e-9);
  CHECK(square.star_shaped);

  const CellGeometry tri = cell_geometry(testsupport::equilateral_triangle());
  CHECK(std::abs(tri.rho_edge - 1.0) < 1e-9);
  CHECK(std::abs(tri.rho_star - 1.0 / (2.0 * std::sqrt(3.0))) < 1e-9);

  const CellGeometry comb = cell_geometry(testsupport::comb_polygon());
  CHECK(!comb.star_shaped);
  CHECK(comb.rho_star == 0.0);
}

TEST_CASE("regularity is scale invariant") {
  const std::vector<Vec2> pent = testsupport::random_pentagon();
  const CellGeometry ref = cell_geometry(pent);
  for (double lambda : {0.037, 3.7, 481.0}) {
    std::vector<Vec2> scaled = pent;
    for (Vec2& v : scaled) v *= lambda;
    const CellGeometry g = cell_geometry(scaled);
    CHECK(std::abs(g.rho_edge - ref.rho_edge) < 1e-12);
    CHECK(std::abs(g.rho_star - ref.rho_star) < 1e-12);
  }
}

TEST_CASE("edge normals are unit and interior edges have opposite traversal") {
  const PolygonalMesh mesh = testsupport::mixed_mesh(4);
  for (int e = 0; e < mesh.n_edges(); ++e) {
    const Vec2 a = mesh.vertices[mesh.edges[e].a];
    const Vec2 b = mesh.vertices[mesh.edges[e].b];
    const Vec2 n = rotate_minus90((b - a).normalized());
    CHECK(std::abs(n.norm() - 1.0) < 1e-14);
  }
  std::vector<int> seen(mesh.n_edges(), 0);
  for (int c = 0; c < mesh.n_cells(); ++c)
    for (std::size_t i = 0; i < mesh.cell_edges[c].size(); ++i)
      seen[mesh.cell_edges[c][i]] += mesh.cell_edge_sign[c][i];
  for (int e = 0; e < mesh.n_edges(); ++e) {
    if (mesh.boundary_edge[e])
      CHECK(std::abs(seen[e]) == 1);
    else
      CHECK(seen[e] == 0); // the two cells see opposite outward normals
  }
}

TEST_CASE("mixed mesh is a valid conforming partition") {
  const PolygonalMesh mesh = testsupport::mixed_mesh(4);
  const RegularityReport report = check_regularity(mesh, 0.01);
  CHECK(report.pass);
  double total = 0.0;
  std::size_t pentagons = 0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    total += signed_area(mesh.cell_polygon(c));
    if (mesh.cells[c].size() == 5) ++pentagons;
  }
  CHECK(std::abs(total - 1.0) < 1e-12);
  CHECK(pentagons == 8);
}

TEST_CASE("regularity threshold validation") {
  const PolygonalMesh mesh = generate_mesh(MeshFamily::UniformQuad, 2);
  CHECK_THROWS_AS(check_regularity(mesh, 0.0), Error);
  CHECK_THROWS_AS(check_regularity(mesh, 1.5), Error);
  const RegularityReport strict = check_regularity(mesh, 0.9);
  CHECK(!strict.pass);
  for (const auto& cell : strict.cells) {
    CHECK(strict.rho <= cell.rho_edge);
    CHECK(strict.rho <= cell.rho_star);
  }
}
