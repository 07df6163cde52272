#pragma once

#include <array>
#include <string>
#include <vector>

#include "vem/geometry.hpp"

namespace vem {

/// Conforming polygonal partition. Cells are stored as CCW vertex cycles;
/// edges are derived with the canonical orientation low index -> high index
/// and the canonical normal equal to the edge direction rotated -90 degrees.
/// Immutable after construction.
struct PolygonalMesh {
  struct Edge {
    int a = -1, b = -1; // a < b
  };

  std::vector<Vec2> vertices;
  std::vector<std::vector<int>> cells;

  std::vector<Edge> edges;
  std::vector<std::array<int, 2>> edge_cells; // incident cells, -1 when absent
  std::vector<std::vector<int>> cell_edges;   // edge ids in cycle order
  std::vector<std::vector<int>> cell_edge_sign; // +1 if traversal is a->b
  std::vector<bool> boundary_edge;
  std::vector<bool> boundary_vertex;

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_cells() const { return static_cast<int>(cells.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }

  std::vector<Vec2> cell_polygon(int cell) const;
};

/// Validates and finalizes raw vertex/cell data: normalizes orientation to
/// CCW, derives edges/flags, and rejects duplicate vertices, non-simple
/// cells and non-conforming partitions (hanging vertices, over-shared edges).
PolygonalMesh build_mesh(std::vector<Vec2> vertices,
                         std::vector<std::vector<int>> cells);

/// Parses the JSON mesh format {"vertices": [[x,y],...], "cells": [[i,...],...]}.
PolygonalMesh load_mesh(const std::string& json_text);

enum class MeshFamily { UniformQuad, UniformTriangle, PerturbedQuad };

MeshFamily mesh_family_from_string(const std::string& name);

/// Structured families on the unit square with n subdivisions per side.
/// PerturbedQuad displaces interior vertices by a seeded pseudo-random offset
/// bounded by 0.2/n per coordinate, so repeated calls give identical meshes.
PolygonalMesh generate_mesh(MeshFamily family, int n);

/// Per-cell shape data. star_center is the centroid when the centroid lies in
/// the kernel, otherwise the center of the largest inscribed kernel disc.
/// rho_star is the radius of that largest disc divided by the diameter;
/// zero (with star_shaped == false) when the kernel is empty.
struct CellGeometry {
  double diameter = 0.0;
  double area = 0.0;
  Vec2 centroid = Vec2::Zero();
  Vec2 star_center = Vec2::Zero();
  double rho_edge = 0.0;
  double rho_star = 0.0;
  bool star_shaped = false;
};

CellGeometry cell_geometry(const std::vector<Vec2>& polygon_ccw);
CellGeometry cell_geometry(const PolygonalMesh& mesh, int cell);

struct RegularityReport {
  struct CellEntry {
    int cell = 0;
    double rho_edge = 0.0;
    double rho_star = 0.0;
    bool star_shaped = false;
  };
  std::vector<CellEntry> cells;
  double rho = 0.0;      // mesh-wide min of min(rho_edge, rho_star)
  double threshold = 0.0;
  bool pass = false;
};

RegularityReport check_regularity(const PolygonalMesh& mesh, double rho_min);

/// Largest cell diameter.
double mesh_size(const PolygonalMesh& mesh);

} // namespace vem
