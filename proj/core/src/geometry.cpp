#include "vem/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vem {

double signed_area(const std::vector<Vec2>& poly) {
  const std::size_t n = poly.size();
  double a = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % n];
    a += cross2(p, q);
  }
  return 0.5 * a;
}

Vec2 polygon_centroid(const std::vector<Vec2>& poly) {
  const std::size_t n = poly.size();
  Vec2 c = Vec2::Zero();
  double a = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % n];
    const double w = cross2(p, q);
    c += w * (p + q);
    a += w;
  }
  return c / (3.0 * a);
}

double polygon_diameter(const std::vector<Vec2>& poly) {
  double d = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i)
    for (std::size_t j = i + 1; j < poly.size(); ++j)
      d = std::max(d, (poly[i] - poly[j]).norm());
  return d;
}

namespace {

// Orientation of c relative to the segment a->b, with absolute tolerance.
int orient(const Vec2& a, const Vec2& b, const Vec2& c, double tol) {
  const double v = cross2(b - a, c - a);
  if (v > tol) return 1;
  if (v < -tol) return -1;
  return 0;
}

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p, double tol) {
  if (orient(a, b, p, tol * (b - a).norm()) != 0) return false;
  const double t = (p - a).dot(b - a) / (b - a).squaredNorm();
  return t >= -tol && t <= 1.0 + tol;
}

// Proper or touching intersection of segments [a,b] and [c,d].
bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c,
                        const Vec2& d, double tol) {
  const double s1 = (b - a).norm(), s2 = (d - c).norm();
  const int o1 = orient(a, b, c, tol * s1);
  const int o2 = orient(a, b, d, tol * s1);
  const int o3 = orient(c, d, a, tol * s2);
  const int o4 = orient(c, d, b, tol * s2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c, tol)) return true;
  if (o2 == 0 && on_segment(a, b, d, tol)) return true;
  if (o3 == 0 && on_segment(c, d, a, tol)) return true;
  if (o4 == 0 && on_segment(c, d, b, tol)) return true;
  return false;
}

} // namespace

bool polygon_is_simple(const std::vector<Vec2>& poly, double tol) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    if ((b - a).norm() <= tol) return false; // zero-length edge
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    // consecutive edges must not fold back onto each other
    const Vec2& c = poly[(i + 2) % n];
    if (orient(a, b, c, tol * (b - a).norm()) == 0 &&
        (c - b).dot(b - a) < 0.0)
      return false;
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) continue;
      const Vec2& p = poly[j];
      const Vec2& q = poly[(j + 1) % n];
      if (segments_intersect(a, b, p, q, tol)) return false;
    }
  }
  return true;
}

double kernel_slack(const std::vector<Vec2>& poly_ccw, const Vec2& p) {
  const std::size_t n = poly_ccw.size();
  double slack = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = poly_ccw[i];
    const Vec2& b = poly_ccw[(i + 1) % n];
    const Vec2 nrm = rotate_minus90((b - a).normalized());
    slack = std::min(slack, nrm.dot(a - p));
  }
  return slack;
}

std::vector<Vec2> polygon_kernel(const std::vector<Vec2>& poly_ccw,
                                 double tol) {
  std::vector<Vec2> region = poly_ccw;
  const std::size_t n = poly_ccw.size();
  for (std::size_t i = 0; i < n && !region.empty(); ++i) {
    const Vec2& a = poly_ccw[i];
    const Vec2& b = poly_ccw[(i + 1) % n];
    const Vec2 nrm = rotate_minus90((b - a).normalized());
    const double c = nrm.dot(a);
    // Sutherland-Hodgman clip of `region` against nrm . x <= c
    std::vector<Vec2> out;
    const std::size_t m = region.size();
    for (std::size_t j = 0; j < m; ++j) {
      const Vec2& p = region[j];
      const Vec2& q = region[(j + 1) % m];
      const double dp = nrm.dot(p) - c;
      const double dq = nrm.dot(q) - c;
      const bool pin = dp <= tol;
      const bool qin = dq <= tol;
      if (pin) out.push_back(p);
      if (pin != qin) {
        const double t = dp / (dp - dq);
        out.push_back(p + t * (q - p));
      }
    }
    region = std::move(out);
    if (region.size() < 3) return {};
  }
  return region;
}

InscribedDisc kernel_inscribed_disc(const std::vector<Vec2>& poly_ccw) {
  const std::size_t n = poly_ccw.size();
  const double diam = polygon_diameter(poly_ccw);
  const double feas_tol = 1e-9 * diam;

  // Constraint per edge: n_e . x + r <= n_e . a_e. The optimum of the
  // 3-variable program sits on a vertex of the feasible set, i.e. with three
  // active constraints; enumerate triples and keep the best feasible one.
  std::vector<Vec2> normals(n);
  std::vector<double> offsets(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = poly_ccw[i];
    const Vec2& b = poly_ccw[(i + 1) % n];
    normals[i] = rotate_minus90((b - a).normalized());
    offsets[i] = normals[i].dot(a);
  }

  InscribedDisc best;
  auto consider = [&](const Vec2& c, double r) {
    if (r <= best.radius) return;
    for (std::size_t e = 0; e < n; ++e)
      if (normals[e].dot(c) + r > offsets[e] + feas_tol) return;
    best.center = c;
    best.radius = r;
  };

  Eigen::Matrix3d M;
  Eigen::Vector3d rhs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        M << normals[i].x(), normals[i].y(), 1.0, //
            normals[j].x(), normals[j].y(), 1.0,  //
            normals[k].x(), normals[k].y(), 1.0;
        Eigen::FullPivLU<Eigen::Matrix3d> lu(M);
        if (!lu.isInvertible()) continue;
        rhs << offsets[i], offsets[j], offsets[k];
        const Eigen::Vector3d sol = lu.solve(rhs);
        consider(Vec2(sol[0], sol[1]), sol[2]);
      }

  if (best.radius <= 0.0) return {};
  return best;
}

} // namespace vem
