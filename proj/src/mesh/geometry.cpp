#include "bbmwave/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

#include <boost/multiprecision/cpp_int.hpp>

namespace bbmwave {

namespace {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

constexpr double kEps = std::numeric_limits<double>::epsilon() / 2.0;  // 2^-53
constexpr double kOrientBound = (3.0 + 16.0 * kEps) * kEps;
constexpr double kInCircleBound = (10.0 + 96.0 * kEps) * kEps;

Rational exact(double value) {
  if (value == 0.0) return Rational(0);
  int exponent = 0;
  const double mantissa = std::frexp(value, &exponent);
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
  BigInt numerator = scaled;
  exponent -= 53;
  if (exponent >= 0) {
    numerator <<= exponent;
    return Rational(numerator);
  }
  BigInt denominator = 1;
  denominator <<= -exponent;
  return Rational(numerator, denominator);
}

int sign_of(const Rational& r) { return r.sign(); }

int orient2d_exact(Point2 a, Point2 b, Point2 c) {
  const Rational acx = exact(a.x) - exact(c.x);
  const Rational bcx = exact(b.x) - exact(c.x);
  const Rational acy = exact(a.y) - exact(c.y);
  const Rational bcy = exact(b.y) - exact(c.y);
  return sign_of(acx * bcy - acy * bcx);
}

int incircle_exact(Point2 a, Point2 b, Point2 c, Point2 d) {
  const Rational dx = exact(d.x);
  const Rational dy = exact(d.y);
  const Rational adx = exact(a.x) - dx, ady = exact(a.y) - dy;
  const Rational bdx = exact(b.x) - dx, bdy = exact(b.y) - dy;
  const Rational cdx = exact(c.x) - dx, cdy = exact(c.y) - dy;
  const Rational alift = adx * adx + ady * ady;
  const Rational blift = bdx * bdx + bdy * bdy;
  const Rational clift = cdx * cdx + cdy * cdy;
  const Rational det = alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) +
                       clift * (adx * bdy - bdx * ady);
  return sign_of(det);
}

}  // namespace

int orient2d(Point2 a, Point2 b, Point2 c) {
  const double detleft = (a.x - c.x) * (b.y - c.y);
  const double detright = (a.y - c.y) * (b.x - c.x);
  const double det = detleft - detright;
  const double detsum = std::abs(detleft) + std::abs(detright);
  if (std::abs(det) > kOrientBound * detsum) return det > 0 ? 1 : -1;
  if (detsum == 0.0) return 0;
  return orient2d_exact(a, b, c);
}

int incircle(Point2 a, Point2 b, Point2 c, Point2 d) {
  const double adx = a.x - d.x, ady = a.y - d.y;
  const double bdx = b.x - d.x, bdy = b.y - d.y;
  const double cdx = c.x - d.x, cdy = c.y - d.y;

  const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
  const double alift = adx * adx + ady * ady;
  const double cdxady = cdx * ady, adxcdy = adx * cdy;
  const double blift = bdx * bdx + bdy * bdy;
  const double adxbdy = adx * bdy, bdxady = bdx * ady;
  const double clift = cdx * cdx + cdy * cdy;

  const double det =
      alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady);
  const double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * alift +
                           (std::abs(cdxady) + std::abs(adxcdy)) * blift +
                           (std::abs(adxbdy) + std::abs(bdxady)) * clift;
  if (std::abs(det) > kInCircleBound * permanent) return det > 0 ? 1 : -1;
  if (permanent == 0.0) return 0;
  return incircle_exact(a, b, c, d);
}

Point2 circumcenter(Point2 a, Point2 b, Point2 c) {
  // Relative to a to limit cancellation.
  const Vec2 ab = b - a;
  const Vec2 ac = c - a;
  const double ab2 = dot(ab, ab);
  const double ac2 = dot(ac, ac);
  const double denom = 2.0 * cross(ab, ac);
  const double ux = (ac.y * ab2 - ab.y * ac2) / denom;
  const double uy = (ab.x * ac2 - ac.x * ab2) / denom;
  return {a.x + ux, a.y + uy};
}

double min_angle_deg(Point2 a, Point2 b, Point2 c) {
  const double la = distance(b, c);
  const double lb = distance(c, a);
  const double lc = distance(a, b);
  // Smallest angle is opposite the shortest side; law of cosines via atan2
  // of cross and dot for accuracy on slivers.
  auto angle_at = [](Point2 apex, Point2 p, Point2 q) {
    const Vec2 u = p - apex;
    const Vec2 v = q - apex;
    return std::atan2(std::abs(cross(u, v)), dot(u, v));
  };
  double angle = 0.0;
  if (la <= lb && la <= lc) {
    angle = angle_at(a, b, c);
  } else if (lb <= lc) {
    angle = angle_at(b, c, a);
  } else {
    angle = angle_at(c, a, b);
  }
  return angle * 180.0 / std::numbers::pi;
}

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return distance(p, a);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return distance(p, a + t * ab);
}

bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d) {
  const int o1 = orient2d(a, b, c);
  const int o2 = orient2d(a, b, d);
  const int o3 = orient2d(c, d, a);
  const int o4 = orient2d(c, d, b);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  auto on_segment = [](Point2 p, Point2 q, Point2 r) {
    return std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) && std::min(p.y, q.y) <= r.y &&
           r.y <= std::max(p.y, q.y);
  };
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

}  // namespace bbmwave
