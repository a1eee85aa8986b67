#include <algorithm>
#include <cmath>

#include "bbmwave/meshgen.hpp"

namespace bbmwave {

double Polyline::length() const {
  double sum = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) sum += distance(points[i - 1], points[i]);
  if (closed && points.size() > 2) sum += distance(points.back(), points.front());
  return sum;
}

double Polyline::signed_area() const {
  double sum = 0.0;
  const std::size_t n = points.size();
  for (std::size_t i = 0; i < n; ++i) sum += cross(points[i], points[(i + 1) % n]);
  return 0.5 * sum;
}

Polyline smooth_polyline(const Polyline& poly, std::size_t iters, double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw MeshgenError("smooth_polyline: lambda must lie in (0, 1)");
  Polyline out = poly;
  const std::size_t n = out.points.size();
  if (n < 3) return out;
  std::vector<Point2> prev;
  for (std::size_t it = 0; it < iters; ++it) {
    prev = out.points;
    const std::size_t first = out.closed ? 0 : 1;
    const std::size_t last = out.closed ? n : n - 1;
    for (std::size_t i = first; i < last; ++i) {
      const Point2 a = prev[(i + n - 1) % n];
      const Point2 b = prev[(i + 1) % n];
      const Point2 p = prev[i];
      out.points[i] = p + (0.5 * lambda) * ((a - p) + (b - p));
    }
  }
  return out;
}

namespace {

// Douglas-Peucker over pts[first..last] (inclusive); marks kept points.
void douglas_peucker(const std::vector<Point2>& pts, std::size_t first, std::size_t last, double eps,
                     std::vector<bool>& keep) {
  std::vector<std::pair<std::size_t, std::size_t>> stack{{first, last}};
  keep[first] = keep[last] = true;
  while (!stack.empty()) {
    const auto [lo, hi] = stack.back();
    stack.pop_back();
    double worst = -1.0;
    std::size_t worst_i = lo;
    for (std::size_t i = lo + 1; i < hi; ++i) {
      const double d = point_segment_distance(pts[i], pts[lo], pts[hi]);
      if (d > worst) {
        worst = d;
        worst_i = i;
      }
    }
    if (worst > eps) {
      keep[worst_i] = true;
      stack.push_back({lo, worst_i});
      stack.push_back({worst_i, hi});
    }
  }
}

std::vector<Point2> drop_consecutive_duplicates(std::vector<Point2> pts, bool closed) {
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  while (closed && pts.size() > 1 && pts.front() == pts.back()) pts.pop_back();
  return pts;
}

}  // namespace

Polyline simplify_polyline(const Polyline& poly, double eps) {
  if (eps < 0.0) throw MeshgenError("simplify_polyline: eps must be nonnegative");
  Polyline out;
  out.closed = poly.closed;
  const auto pts = drop_consecutive_duplicates(poly.points, poly.closed);
  const std::size_t n = pts.size();
  if (n < 3) {
    out.points = pts;
    return out;
  }

  if (!poly.closed) {
    std::vector<bool> keep(n, false);
    douglas_peucker(pts, 0, n - 1, eps, keep);
    for (std::size_t i = 0; i < n; ++i)
      if (keep[i]) out.points.push_back(pts[i]);
    return out;
  }

  // Split at the farthest-point pair, rotated so the pair is (0, split).
  std::size_t pi = 0, pj = 1;
  double best = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Vec2 d = pts[j] - pts[i];
      const double d2 = dot(d, d);
      if (d2 > best) {
        best = d2;
        pi = i;
        pj = j;
      }
    }
  }
  std::vector<Point2> ring;
  ring.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k) ring.push_back(pts[(pi + k) % n]);
  const std::size_t split = pj - pi;
  std::vector<bool> keep(n + 1, false);
  douglas_peucker(ring, 0, split, eps, keep);
  douglas_peucker(ring, split, n, eps, keep);

  std::size_t kept = 0;
  for (std::size_t k = 0; k < n; ++k) kept += keep[k] ? 1 : 0;
  if (kept < 3) {
    // Keep the point farthest from the chord so the ring stays a polygon.
    double worst = -1.0;
    std::size_t worst_k = 0;
    for (std::size_t k = 1; k < n; ++k) {
      if (keep[k]) continue;
      const double d = point_segment_distance(ring[k], ring[0], ring[split]);
      if (d > worst) {
        worst = d;
        worst_k = k;
      }
    }
    keep[worst_k] = true;
  }
  for (std::size_t k = 0; k < n; ++k)
    if (keep[k]) out.points.push_back(ring[k]);
  return out;
}

}  // namespace bbmwave
