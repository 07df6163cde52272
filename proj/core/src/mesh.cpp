#include "vem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include <json.hpp>

#include "vem/errors.hpp"

namespace vem {

std::vector<Vec2> PolygonalMesh::cell_polygon(int cell) const {
  std::vector<Vec2> poly;
  poly.reserve(cells[cell].size());
  for (int v : cells[cell]) poly.push_back(vertices[v]);
  return poly;
}

namespace {

double bounding_box_diameter(const std::vector<Vec2>& vertices) {
  Vec2 lo(std::numeric_limits<double>::max(), std::numeric_limits<double>::max());
  Vec2 hi = -lo;
  for (const Vec2& v : vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  return (hi - lo).norm();
}

bool strictly_inside_segment(const Vec2& a, const Vec2& b, const Vec2& p,
                             double tol) {
  const Vec2 d = b - a;
  const double len = d.norm();
  if (std::abs(cross2(d, p - a)) > tol * len) return false;
  const double t = (p - a).dot(d) / (len * len);
  return t > tol / len && t < 1.0 - tol / len;
}

} // namespace

PolygonalMesh build_mesh(std::vector<Vec2> vertices,
                         std::vector<std::vector<int>> cells) {
  PolygonalMesh mesh;
  const int nv = static_cast<int>(vertices.size());
  if (nv < 3) throw MeshError("mesh needs at least 3 vertices");

  const double scale = bounding_box_diameter(vertices);
  if (scale <= 0.0) throw MeshError("mesh has zero extent");
  const double tol = 1e-12 * scale;

  for (int i = 0; i < nv; ++i)
    for (int j = i + 1; j < nv; ++j)
      if ((vertices[i] - vertices[j]).norm() <= tol) {
        std::ostringstream os;
        os << "duplicate vertices " << i << " and " << j;
        throw MeshError(os.str());
      }

  for (std::size_t c = 0; c < cells.size(); ++c) {
    auto& cell = cells[c];
    if (cell.size() < 3) throw MeshError("cell with fewer than 3 vertices");
    for (int v : cell)
      if (v < 0 || v >= nv) throw MeshError("cell vertex index out of range");
    std::vector<int> sorted = cell;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw MeshError("cell repeats a vertex");

    std::vector<Vec2> poly;
    poly.reserve(cell.size());
    for (int v : cell) poly.push_back(vertices[v]);
    const double area = signed_area(poly);
    if (std::abs(area) <= tol * tol)
      throw MeshError("cell with vanishing area");
    if (area < 0.0) { // accept CW input, normalize to CCW
      std::reverse(cell.begin(), cell.end());
      std::reverse(poly.begin(), poly.end());
    }
    if (!polygon_is_simple(poly, tol)) {
      std::ostringstream os;
      os << "cell " << c << " is not a simple polygon";
      throw MeshError(os.str());
    }
  }

  mesh.vertices = std::move(vertices);
  mesh.cells = std::move(cells);

  // Derive canonical edges and incidences.
  std::map<std::pair<int, int>, int> edge_ids;
  mesh.cell_edges.resize(mesh.cells.size());
  mesh.cell_edge_sign.resize(mesh.cells.size());
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto& cell = mesh.cells[c];
    const int m = static_cast<int>(cell.size());
    for (int i = 0; i < m; ++i) {
      const int va = cell[i];
      const int vb = cell[(i + 1) % m];
      const std::pair<int, int> key = std::minmax(va, vb);
      auto [it, inserted] = edge_ids.try_emplace(
          key, static_cast<int>(mesh.edges.size()));
      if (inserted) {
        mesh.edges.push_back({key.first, key.second});
        mesh.edge_cells.push_back({-1, -1});
      }
      const int e = it->second;
      auto& inc = mesh.edge_cells[e];
      const int sign = (va == key.first) ? 1 : -1;
      if (inc[0] == -1) {
        inc[0] = c;
      } else if (inc[1] == -1) {
        inc[1] = c;
      } else {
        std::ostringstream os;
        os << "edge (" << key.first << "," << key.second
           << ") shared by more than two cells";
        throw MeshError(os.str());
      }
      mesh.cell_edges[c].push_back(e);
      mesh.cell_edge_sign[c].push_back(sign);
    }
  }

  // Interior edges must be traversed in opposite directions by their cells.
  std::vector<int> first_sign(mesh.n_edges(), 0);
  for (int c = 0; c < mesh.n_cells(); ++c)
    for (std::size_t i = 0; i < mesh.cell_edges[c].size(); ++i) {
      const int e = mesh.cell_edges[c][i];
      const int s = mesh.cell_edge_sign[c][i];
      if (first_sign[e] == 0)
        first_sign[e] = s;
      else if (first_sign[e] == s)
        throw MeshError("two cells traverse a shared edge in the same "
                        "direction (inconsistent orientation)");
    }

  mesh.boundary_edge.assign(mesh.n_edges(), false);
  mesh.boundary_vertex.assign(mesh.n_vertices(), false);
  for (int e = 0; e < mesh.n_edges(); ++e)
    if (mesh.edge_cells[e][1] == -1) {
      mesh.boundary_edge[e] = true;
      mesh.boundary_vertex[mesh.edges[e].a] = true;
      mesh.boundary_vertex[mesh.edges[e].b] = true;
    }

  // Conformity: no vertex may sit strictly inside another cell's edge.
  for (int e = 0; e < mesh.n_edges(); ++e) {
    const Vec2& a = mesh.vertices[mesh.edges[e].a];
    const Vec2& b = mesh.vertices[mesh.edges[e].b];
    for (int v = 0; v < nv; ++v) {
      if (v == mesh.edges[e].a || v == mesh.edges[e].b) continue;
      if (strictly_inside_segment(a, b, mesh.vertices[v], tol)) {
        std::ostringstream os;
        os << "hanging vertex " << v << " inside edge (" << mesh.edges[e].a
           << "," << mesh.edges[e].b << "): non-conforming partition";
        throw MeshError(os.str());
      }
    }
  }

  return mesh;
}

PolygonalMesh load_mesh(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw MeshError(std::string("malformed mesh file: ") + e.what());
  }
  if (!doc.contains("vertices") || !doc.contains("cells"))
    throw MeshError("mesh file must contain \"vertices\" and \"cells\"");

  std::vector<Vec2> vertices;
  std::vector<std::vector<int>> cells;
  try {
    for (const auto& v : doc["vertices"]) {
      if (!v.is_array() || v.size() != 2)
        throw MeshError("vertex entries must be [x, y]");
      vertices.emplace_back(v[0].get<double>(), v[1].get<double>());
    }
    for (const auto& c : doc["cells"])
      cells.push_back(c.get<std::vector<int>>());
  } catch (const nlohmann::json::exception& e) {
    throw MeshError(std::string("malformed mesh file: ") + e.what());
  }
  return build_mesh(std::move(vertices), std::move(cells));
}

MeshFamily mesh_family_from_string(const std::string& name) {
  if (name == "uniform-quad") return MeshFamily::UniformQuad;
  if (name == "uniform-triangle") return MeshFamily::UniformTriangle;
  if (name == "perturbed-quad") return MeshFamily::PerturbedQuad;
  throw Error("unknown mesh family: " + name);
}

PolygonalMesh generate_mesh(MeshFamily family, int n) {
  if (n < 1) throw Error("mesh level must be >= 1");
  const int nv1 = n + 1;
  std::vector<Vec2> vertices(static_cast<std::size_t>(nv1) * nv1);
  auto vid = [nv1](int i, int j) { return j * nv1 + i; };
  for (int j = 0; j < nv1; ++j)
    for (int i = 0; i < nv1; ++i)
      vertices[vid(i, j)] = Vec2(double(i) / n, double(j) / n);

  if (family == MeshFamily::PerturbedQuad) {
    std::mt19937_64 rng(0x5eed1234u + static_cast<std::uint64_t>(n));
    std::uniform_real_distribution<double> shift(-0.2 / n, 0.2 / n);
    for (int j = 1; j < n; ++j)
      for (int i = 1; i < n; ++i) {
        const double dx = shift(rng);
        const double dy = shift(rng);
        vertices[vid(i, j)] += Vec2(dx, dy);
      }
  }

  std::vector<std::vector<int>> cells;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int v00 = vid(i, j), v10 = vid(i + 1, j);
      const int v11 = vid(i + 1, j + 1), v01 = vid(i, j + 1);
      if (family == MeshFamily::UniformTriangle) {
        cells.push_back({v00, v10, v11});
        cells.push_back({v00, v11, v01});
      } else {
        cells.push_back({v00, v10, v11, v01});
      }
    }
  return build_mesh(std::move(vertices), std::move(cells));
}

CellGeometry cell_geometry(const std::vector<Vec2>& polygon_ccw) {
  CellGeometry g;
  g.diameter = polygon_diameter(polygon_ccw);
  g.area = signed_area(polygon_ccw);
  g.centroid = polygon_centroid(polygon_ccw);

  double min_edge = std::numeric_limits<double>::max();
  const std::size_t m = polygon_ccw.size();
  for (std::size_t i = 0; i < m; ++i)
    min_edge = std::min(
        min_edge, (polygon_ccw[(i + 1) % m] - polygon_ccw[i]).norm());
  g.rho_edge = min_edge / g.diameter;

  const InscribedDisc disc = kernel_inscribed_disc(polygon_ccw);
  if (disc.radius > 0.0) {
    g.star_shaped = true;
    g.rho_star = disc.radius / g.diameter;
    const double centroid_slack = kernel_slack(polygon_ccw, g.centroid);
    g.star_center =
        (centroid_slack > 1e-12 * g.diameter) ? g.centroid : disc.center;
  } else {
    g.star_shaped = false;
    g.rho_star = 0.0;
    g.star_center = g.centroid;
  }
  return g;
}

CellGeometry cell_geometry(const PolygonalMesh& mesh, int cell) {
  return cell_geometry(mesh.cell_polygon(cell));
}

RegularityReport check_regularity(const PolygonalMesh& mesh, double rho_min) {
  if (!(rho_min > 0.0 && rho_min < 1.0))
    throw Error("regularity threshold must lie in (0,1)");
  RegularityReport report;
  report.threshold = rho_min;
  report.rho = std::numeric_limits<double>::max();
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const CellGeometry g = cell_geometry(mesh, c);
    report.cells.push_back({c, g.rho_edge, g.rho_star, g.star_shaped});
    report.rho = std::min(report.rho, std::min(g.rho_edge, g.rho_star));
  }
  report.pass = report.rho >= rho_min;
  return report;
}

double mesh_size(const PolygonalMesh& mesh) {
  double h = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c)
    h = std::max(h, polygon_diameter(mesh.cell_polygon(c)));
  return h;
}

} // namespace vem
