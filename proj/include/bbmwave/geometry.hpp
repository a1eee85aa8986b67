#pragma once

#include <cmath>

namespace bbmwave {

/// A point (or displacement) in the plane.
struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr bool operator==(const Point2&, const Point2&) = default;
};

using Vec2 = Point2;

constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
constexpr Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
constexpr Point2 operator*(Point2 a, double s) { return {s * a.x, s * a.y}; }

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(b - a); }
inline bool is_finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

/// Twice the signed area of (a, b, c); positive when counterclockwise.
/// Plain floating point; use orient2d() when the sign must be exact.
constexpr double signed_area2(Point2 a, Point2 b, Point2 c) { return cross(b - a, c - a); }

// Exact-sign geometric predicates (floating-point filter with an exact
// rational fallback). Returned values are only meaningful through their sign.

/// > 0 if a, b, c are counterclockwise, < 0 if clockwise, 0 if collinear.
int orient2d(Point2 a, Point2 b, Point2 c);

/// > 0 if d lies strictly inside the circle through counterclockwise a, b, c,
/// < 0 if outside, 0 if cocircular.
int incircle(Point2 a, Point2 b, Point2 c, Point2 d);

/// Circumcenter of a nondegenerate triangle.
Point2 circumcenter(Point2 a, Point2 b, Point2 c);

/// Smallest interior angle of a triangle, in degrees.
double min_angle_deg(Point2 a, Point2 b, Point2 c);

/// Distance from p to the closed segment [a, b].
double point_segment_distance(Point2 p, Point2 a, Point2 b);

/// True when the closed segments [a, b] and [c, d] share at least one point.
bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d);

}  // namespace bbmwave
