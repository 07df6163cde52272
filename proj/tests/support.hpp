#pragma once

// Shared fixtures for the test suites: deterministic cell shapes and the
// mixed triangle/quad/pentagon mesh used by the patch tests.

#include <random>
#include <utility>
#include <vector>

#include "vem/element.hpp"
#include "vem/mesh.hpp"

namespace testsupport {

using vem::Vec2;

inline std::vector<Vec2> unit_square_cell() {
  return {Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)};
}

inline std::vector<Vec2> equilateral_triangle() {
  return {Vec2(0, 0), Vec2(1, 0), Vec2(0.5, std::sqrt(3.0) / 2.0)};
}

inline std::vector<Vec2> thin_quad() {
  return {Vec2(0, 0), Vec2(1, 0), Vec2(1, 0.15), Vec2(0, 0.15)};
}

/// Irregular star-shaped polygon with seeded radii/angles.
inline std::vector<Vec2> seeded_polygon(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> radius(0.65, 1.1);
  std::uniform_real_distribution<double> jitter(-0.3, 0.3);
  std::vector<Vec2> poly;
  const double step = 2.0 * M_PI / n;
  for (int i = 0; i < n; ++i) {
    const double th = step * (i + 0.5 * jitter(rng));
    const double r = radius(rng);
    poly.emplace_back(r * std::cos(th), r * std::sin(th));
  }
  return poly;
}

inline std::vector<Vec2> random_pentagon() { return seeded_polygon(5, 71u); }
inline std::vector<Vec2> random_hexagon() { return seeded_polygon(6, 1729u); }

/// Non-star-shaped U: the two inner notch edges have disjoint half-planes.
inline std::vector<Vec2> comb_polygon() {
  return {Vec2(0, 0), Vec2(3, 0), Vec2(3, 2), Vec2(2, 2),
          Vec2(2, 1), Vec2(1, 1), Vec2(1, 2), Vec2(0, 2)};
}

/// The five shapes used by the projector reproduction sweeps.
inline std::vector<std::pair<std::string, std::vector<Vec2>>>
projector_shapes() {
  return {{"square", unit_square_cell()},
          {"pentagon", random_pentagon()},
          {"hexagon", random_hexagon()},
          {"thin-quad", thin_quad()},
          {"triangle", equilateral_triangle()}};
}

/// Conforming mix of quads, triangles and (degenerate-convex) pentagons on
/// the unit square: mid-edge vertices along the line y = 1/2 turn the two
/// adjacent rows into pentagons; away from that line alternate cells are
/// split into triangle pairs. n must be even and >= 2.
inline vem::PolygonalMesh mixed_mesh(int n) {
  const int nv1 = n + 1;
  std::vector<Vec2> verts(static_cast<std::size_t>(nv1) * nv1);
  auto vid = [nv1](int i, int j) { return j * nv1 + i; };
  for (int j = 0; j < nv1; ++j)
    for (int i = 0; i < nv1; ++i)
      verts[vid(i, j)] = Vec2(double(i) / n, double(j) / n);

  const int mid_base = nv1 * nv1;
  const int jmid = n / 2;
  for (int i = 0; i < n; ++i)
    verts.push_back(Vec2((i + 0.5) / n, double(jmid) / n));
  auto mid = [&](int i) { return mid_base + i; };

  std::vector<std::vector<int>> cells;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int v00 = vid(i, j), v10 = vid(i + 1, j);
      const int v11 = vid(i + 1, j + 1), v01 = vid(i, j + 1);
      if (j == jmid - 1) {
        cells.push_back({v00, v10, v11, mid(i), v01});
      } else if (j == jmid) {
        cells.push_back({v00, mid(i), v10, v11, v01});
      } else if ((i + j) % 2 == 0) {
        cells.push_back({v00, v10, v11});
        cells.push_back({v00, v11, v01});
      } else {
        cells.push_back({v00, v10, v11, v01});
      }
    }
  return vem::build_mesh(std::move(verts), std::move(cells));
}

inline Eigen::VectorXd random_vector(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

/// Random polynomial of degree `deg` in the given frame.
inline vem::CellPoly random_poly(const vem::CellFrame& frame, int deg,
                                 unsigned seed) {
  vem::CellPoly p = vem::CellPoly::zero(frame, deg);
  p.coeffs = random_vector(static_cast<int>(p.coeffs.size()), seed);
  return p;
}

} // namespace testsupport
