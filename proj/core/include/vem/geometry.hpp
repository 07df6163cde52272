#pragma once

#include <Eigen/Dense>
#include <vector>

namespace vem {

using Vec2 = Eigen::Vector2d;

/// Rotate a vector by -90 degrees: (x,y) -> (y,-x). Applied to the tangent of
/// a CCW-traversed edge this gives the outward normal.
inline Vec2 rotate_minus90(const Vec2& v) { return Vec2(v.y(), -v.x()); }

inline double cross2(const Vec2& a, const Vec2& b) {
  return a.x() * b.y() - a.y() * b.x();
}

/// Shoelace area; positive for CCW polygons.
double signed_area(const std::vector<Vec2>& poly);

Vec2 polygon_centroid(const std::vector<Vec2>& poly);

/// Maximum pairwise vertex distance.
double polygon_diameter(const std::vector<Vec2>& poly);

/// True if no two non-adjacent edges intersect and consecutive edges never
/// backtrack over each other. Consecutive collinear edges (straight angles)
/// are allowed. `tol` is an absolute length tolerance.
bool polygon_is_simple(const std::vector<Vec2>& poly, double tol);

/// Minimum over the edges of the signed distance from p to the edge line,
/// positive on the inner side. Nonnegative iff p lies in the polygon kernel;
/// the value is then the radius of the largest disc about p inside the kernel.
double kernel_slack(const std::vector<Vec2>& poly_ccw, const Vec2& p);

/// Kernel of a simple CCW polygon: intersection of the inner half-planes of
/// all edges. Empty result means the polygon is not star-shaped.
std::vector<Vec2> polygon_kernel(const std::vector<Vec2>& poly_ccw, double tol);

struct InscribedDisc {
  Vec2 center = Vec2::Zero();
  double radius = 0.0;
};

/// Largest disc contained in the kernel (Chebyshev center of the edge
/// half-plane system). radius == 0 when the kernel is empty or degenerate.
InscribedDisc kernel_inscribed_disc(const std::vector<Vec2>& poly_ccw);

} // namespace vem
