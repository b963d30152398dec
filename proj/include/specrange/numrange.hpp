#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "specrange/linalg.hpp"

namespace specrange {

/// One supporting half-plane {z : Re(e^{i theta} z) <= support} together with
/// the boundary point <Af, f> that touches it.
struct HullSample {
  double theta = 0.0;
  double support = 0.0;
  cplx witness;
};

struct HullOptions {
  std::size_t n_angles = 720;
  /// When positive, one extra angle is inserted between neighbours whose
  /// witnesses are farther apart than this (absolute distance).
  double refine_threshold = 0.0;
  /// Membership/boundary tolerance relative to 1 + ||A||_F.
  double tol = 1e-9;
  EigOptions eig{};
};

/// Polygonal inner and half-plane outer approximations of Num(A).
struct NumericalRangeHull {
  std::vector<HullSample> samples;  // sorted by theta; doubles as the half-plane list
  std::vector<cplx> polygon;        // convex hull of witnesses, counterclockwise
  double tol_hull = 0.0;            // absolute
  double scale = 1.0;               // 1 + ||A||_F

  const std::vector<HullSample>& half_planes() const { return samples; }
};

inline HullSample support_function(const Matrix& a, double theta, const EigOptions& opts = {}) {
  auto [top, f] = top_eigenpair(rotated_real_part(a, theta), opts);
  const cplx witness = f.dot(a * f);  // f^* A f
  return {theta, top, witness};
}

inline HullSample support_function(const OperatorMatrix& a, double theta, const EigOptions& opts = {}) {
  return support_function(a.entries(), theta, opts);
}

namespace detail {

inline double cross(cplx o, cplx a, cplx b) {
  return (a.real() - o.real()) * (b.imag() - o.imag()) - (a.imag() - o.imag()) * (b.real() - o.real());
}

/// Andrew's monotone chain; near-collinear points (relative to `eps`) are
/// dropped so segments and points come out with 2 and 1 vertices.
inline std::vector<cplx> convex_hull(std::vector<cplx> pts, double eps) {
  std::sort(pts.begin(), pts.end(), [](cplx x, cplx y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  std::vector<cplx> uniq;
  for (auto p : pts)
    if (uniq.empty() || std::abs(p - uniq.back()) > eps) uniq.push_back(p);
  if (uniq.size() <= 2) {
    if (uniq.size() == 2 && std::abs(uniq[0] - uniq[1]) <= eps) uniq.pop_back();
    return uniq;
  }
  const double area_eps = eps * std::max(1.0, std::abs(uniq.back() - uniq.front()));
  std::vector<cplx> h(2 * uniq.size());
  std::size_t k = 0;
  for (auto p : uniq) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= area_eps) --k;
    h[k++] = p;
  }
  for (std::size_t i = uniq.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], uniq[i]) <= area_eps) --k;
    h[k++] = uniq[i];
  }
  h.resize(k - 1);
  return h;
}

inline double segment_distance(cplx p, cplx a, cplx b) {
  const cplx ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  const double t = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

}  // namespace detail

/// Support-function sweep at theta_m = 2 pi m / n_angles.
inline NumericalRangeHull compute_hull(const Matrix& a, const HullOptions& opts = {}) {
  if (opts.n_angles < 3) detail::fail(ErrorKind::invalid_input, "numrange", "compute_hull", "n_angles must be >= 3");
  if (a.rows() == 0 || a.rows() != a.cols())
    detail::fail(ErrorKind::invalid_input, "numrange", "compute_hull", "matrix must be square and non-empty");
  NumericalRangeHull hull;
  hull.scale = 1.0 + a.norm();
  if (!std::isfinite(hull.scale))
    detail::fail(ErrorKind::numerical, "numrange", "compute_hull", "Frobenius norm overflows; tolerances cannot be scaled");
  hull.tol_hull = opts.tol * hull.scale;
  const double two_pi = 2.0 * std::numbers::pi;
  hull.samples.reserve(opts.n_angles);
  for (std::size_t m = 0; m < opts.n_angles; ++m)
    hull.samples.push_back(support_function(a, two_pi * static_cast<double>(m) / static_cast<double>(opts.n_angles), opts.eig));

  if (opts.refine_threshold > 0.0) {
    std::vector<HullSample> extra;
    const auto n = hull.samples.size();
    for (std::size_t m = 0; m < n; ++m) {
      const auto& s0 = hull.samples[m];
      const auto& s1 = hull.samples[(m + 1) % n];
      if (std::abs(s0.witness - s1.witness) > opts.refine_threshold) {
        const double mid = s0.theta + 0.5 * two_pi / static_cast<double>(n);
        extra.push_back(support_function(a, mid, opts.eig));
      }
    }
    hull.samples.insert(hull.samples.end(), extra.begin(), extra.end());
    std::sort(hull.samples.begin(), hull.samples.end(), [](const auto& x, const auto& y) { return x.theta < y.theta; });
  }

  std::vector<cplx> pts;
  pts.reserve(hull.samples.size());
  for (const auto& s : hull.samples) pts.push_back(s.witness);
  hull.polygon = detail::convex_hull(std::move(pts), 1e-13 * hull.scale);
  return hull;
}

inline NumericalRangeHull compute_hull(const OperatorMatrix& a, const HullOptions& opts = {}) {
  return compute_hull(a.entries(), opts);
}

/// min over sampled theta of s(theta) - Re(e^{i theta} z); negative outside.
inline double boundary_gap(const NumericalRangeHull& hull, cplx z) {
  double gap = std::numeric_limits<double>::infinity();
  for (const auto& s : hull.samples) gap = std::min(gap, s.support - (std::polar(1.0, s.theta) * z).real());
  return gap;
}

/// Outer (half-plane) membership test.
inline bool contains(const NumericalRangeHull& hull, cplx z, double tol) { return boundary_gap(hull, z) >= -tol; }

/// Distance from z to the boundary measured against the half-plane
/// description; 0 within tol_hull of the boundary.
inline double boundary_distance(const NumericalRangeHull& hull, cplx z) {
  const double gap = boundary_gap(hull, z);
  if (gap < -hull.tol_hull)
    detail::fail(ErrorKind::numerical, "numrange", "boundary_distance",
                 "point lies outside the numerical range by " + std::to_string(-gap));
  return gap <= hull.tol_hull ? 0.0 : gap;
}

/// Vertices of the intersection of the sampled half-planes, obtained from
/// consecutive supporting lines (every line touches Num(A)).
inline std::vector<cplx> outer_polygon(const NumericalRangeHull& hull) {
  std::vector<cplx> out;
  const auto n = hull.samples.size();
  for (std::size_t m = 0; m < n; ++m) {
    const auto& p = hull.samples[m];
    const auto& q = hull.samples[(m + 1) % n];
    // x cos t - y sin t = s for both lines
    const double a11 = std::cos(p.theta), a12 = -std::sin(p.theta);
    const double a21 = std::cos(q.theta), a22 = -std::sin(q.theta);
    const double det = a11 * a22 - a12 * a21;
    if (std::abs(det) < 1e-15) {
      out.push_back(p.witness);
      continue;
    }
    out.push_back({(p.support * a22 - a12 * q.support) / det, (a11 * q.support - a21 * p.support) / det});
  }
  return out;
}

/// Distance from p to the (filled) inner polygon.
inline double distance_to_polygon(const std::vector<cplx>& poly, cplx p) {
  if (poly.empty()) return std::numeric_limits<double>::infinity();
  if (poly.size() == 1) return std::abs(p - poly[0]);
  bool inside = poly.size() >= 3;
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const cplx a = poly[i], b = poly[(i + 1) % poly.size()];
    if (detail::cross(a, b, p) < 0.0) inside = false;
    d = std::min(d, detail::segment_distance(p, a, b));
  }
  return inside ? 0.0 : d;
}

/// Hausdorff distance between the inner polygon and the outer half-plane
/// intersection; the true boundary of Num(A) lies in between.
inline double sandwich_gap(const NumericalRangeHull& hull) {
  double g = 0.0;
  for (auto v : outer_polygon(hull)) g = std::max(g, distance_to_polygon(hull.polygon, v));
  return g;
}

}  // namespace specrange
