#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <string>
#include <unordered_map>

#include "bbmwave/meshgen.hpp"

namespace bbmwave {

namespace {

// Position along the box perimeter, counterclockwise from the lower-left corner.
double perimeter_coordinate(const BoundingBox& box, Point2 p) {
  const double w = box.width(), h = box.height();
  if (p.y == box.lo.y) return p.x - box.lo.x;
  if (p.x == box.hi.x) return w + (p.y - box.lo.y);
  if (p.y == box.hi.y) return w + h + (box.hi.x - p.x);
  if (p.x == box.lo.x) return 2.0 * w + h + (box.hi.y - p.y);
  throw MeshgenError("build_pslg: open contour does not end on the grid boundary");
}

struct Event {
  double s;
  bool is_start;  // contour starts here (wet stretch ends here)
  Point2 p;
};

class PslgBuilder {
 public:
  Point2 point(std::size_t i) const { return points_[i]; }

  std::size_t add_point(Point2 p) {
    const auto key = std::make_pair(p.x, p.y);
    auto [it, inserted] = index_.try_emplace(key, points_.size());
    if (inserted) points_.push_back(p);
    return it->second;
  }

  void add_segment(Point2 a, Point2 b, int label) {
    const auto ia = add_point(a);
    const auto ib = add_point(b);
    if (ia == ib) return;
    segments_.push_back({ia, ib, label});
  }

  std::vector<Point2> points_;
  std::vector<PslgSegment> segments_;

 private:
  std::map<std::pair<double, double>, std::size_t> index_;
};

}  // namespace

PSLG build_pslg(const std::vector<Polyline>& contours, const LevelGrid& level, const PslgOptions& options) {
  const BoundingBox box = level.box();
  const int box_label = options.open_sea == OpenSeaRule::box_is_open_sea ? labels::open_sea : labels::shoreline;
  PslgBuilder builder;

  std::vector<Event> events;
  for (const auto& c : contours) {
    if (c.points.size() < 2) continue;
    if (c.closed && c.points.size() < 3) continue;
    for (std::size_t i = 1; i < c.points.size(); ++i) builder.add_segment(c.points[i - 1], c.points[i], labels::shoreline);
    if (c.closed) {
      builder.add_segment(c.points.back(), c.points.front(), labels::shoreline);
    } else {
      events.push_back({perimeter_coordinate(box, c.points.front()), true, c.points.front()});
      events.push_back({perimeter_coordinate(box, c.points.back()), false, c.points.back()});
    }
  }

  const std::array<Point2, 4> corners = {box.lo, Point2{box.hi.x, box.lo.y}, box.hi, Point2{box.lo.x, box.hi.y}};
  const double w = box.width(), h = box.height();
  const std::array<double, 4> corner_s = {0.0, w, w + h, 2.0 * w + h};
  const double perimeter = 2.0 * (w + h);

  if (events.empty()) {
    if (level.at(0, 0) < 0.0) {
      for (int k = 0; k < 4; ++k) builder.add_segment(corners[k], corners[(k + 1) % 4], box_label);
    }
  } else {
    std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.s < b.s; });
    const std::size_t m = events.size();
    for (std::size_t i = 0; i < m; ++i) {
      if (events[i].is_start) continue;
      // Wet stretch from this contour end to the next contour start.
      const Event& from = events[i];
      const Event& to = events[(i + 1) % m];
      if (!to.is_start) throw MeshgenError("build_pslg: inconsistent contour orientation along the grid boundary");
      double s_to = to.s;
      if (s_to <= from.s) s_to += perimeter;
      Point2 cur = from.p;
      for (int lap = 0; lap < 2; ++lap) {
        for (int k = 0; k < 4; ++k) {
          const double cs = corner_s[k] + lap * perimeter;
          if (cs > from.s && cs < s_to) {
            builder.add_segment(cur, corners[k], box_label);
            cur = corners[k];
          }
        }
      }
      builder.add_segment(cur, to.p, box_label);
    }
  }

  // Trace loops; every point has one outgoing and one incoming segment.
  const std::size_t np = builder.points_.size();
  std::vector<std::size_t> out_seg(np, SIZE_MAX);
  for (std::size_t s = 0; s < builder.segments_.size(); ++s) {
    auto& slot = out_seg[builder.segments_[s].a];
    if (slot != SIZE_MAX) throw MeshgenError("build_pslg: contours touch at a shared point");
    slot = s;
  }
  std::vector<bool> used(builder.segments_.size(), false);
  PSLG out;
  std::unordered_map<std::size_t, std::size_t> remap;
  auto mapped = [&](std::size_t i) {
    auto [it, inserted] = remap.try_emplace(i, out.points.size());
    if (inserted) out.points.push_back(builder.point(i));
    return it->second;
  };
  bool any_wet = false;
  for (std::size_t s0 = 0; s0 < builder.segments_.size(); ++s0) {
    if (used[s0]) continue;
    std::vector<std::size_t> loop;
    std::size_t s = s0;
    double area2 = 0.0;
    while (!used[s]) {
      used[s] = true;
      loop.push_back(s);
      const auto& seg = builder.segments_[s];
      area2 += cross(builder.point(seg.a), builder.point(seg.b));
      s = out_seg[seg.b];
      if (s == SIZE_MAX) throw MeshgenError("build_pslg: boundary curve is not closed");
    }
    if (s != s0) throw MeshgenError("build_pslg: boundary curves branch");
    if (std::abs(0.5 * area2) < options.min_component_area) continue;
    if (area2 > 0.0) any_wet = true;
    for (auto k : loop) {
      const auto& seg = builder.segments_[k];
      out.segments.push_back({mapped(seg.a), mapped(seg.b), seg.label});
    }
  }
  if (!any_wet) throw MeshgenError("no wet region");
  return out;
}

void check_pslg(const PSLG& pslg) {
  const std::size_t n = pslg.segments.size();
  for (const auto& s : pslg.segments) {
    if (s.a >= pslg.points.size() || s.b >= pslg.points.size())
      throw MeshgenError("PSLG segment references a missing point");
    if (pslg.points[s.a] == pslg.points[s.b]) throw MeshgenError("PSLG has a zero-length segment");
  }
  if (n == 0) return;

  // Uniform bucket grid over the segment bounding boxes.
  Point2 lo = pslg.points[pslg.segments[0].a], hi = lo;
  for (const auto& p : pslg.points) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
  }
  const std::size_t cells = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(n))));
  const double cw = std::max(hi.x - lo.x, 1e-300) / static_cast<double>(cells);
  const double ch = std::max(hi.y - lo.y, 1e-300) / static_cast<double>(cells);
  auto cell_of = [&](double v, double origin, double size) {
    return std::min(cells - 1, static_cast<std::size_t>(std::max(0.0, (v - origin) / size)));
  };
  std::vector<std::vector<std::size_t>> buckets(cells * cells);
  for (std::size_t s = 0; s < n; ++s) {
    const Point2 a = pslg.points[pslg.segments[s].a], b = pslg.points[pslg.segments[s].b];
    for (auto ix = cell_of(std::min(a.x, b.x), lo.x, cw); ix <= cell_of(std::max(a.x, b.x), lo.x, cw); ++ix)
      for (auto iy = cell_of(std::min(a.y, b.y), lo.y, ch); iy <= cell_of(std::max(a.y, b.y), lo.y, ch); ++iy)
        buckets[iy * cells + ix].push_back(s);
  }
  for (const auto& bucket : buckets) {
    for (std::size_t i = 0; i < bucket.size(); ++i) {
      for (std::size_t j = i + 1; j < bucket.size(); ++j) {
        const auto& s = pslg.segments[bucket[i]];
        const auto& t = pslg.segments[bucket[j]];
        const Point2 a = pslg.points[s.a], b = pslg.points[s.b], c = pslg.points[t.a], d = pslg.points[t.b];
        const bool share = s.a == t.a || s.a == t.b || s.b == t.a || s.b == t.b;
        bool bad = false;
        if (!share) {
          bad = segments_intersect(a, b, c, d);
        } else if (!(s.a == t.a && s.b == t.b) && !(s.a == t.b && s.b == t.a)) {
          // Sharing one endpoint: only a collinear overlap is a problem.
          const std::size_t shared = (s.a == t.a || s.a == t.b) ? s.a : s.b;
          const Point2 other_s = pslg.points[s.a == shared ? s.b : s.a];
          const Point2 other_t = pslg.points[t.a == shared ? t.b : t.a];
          const Point2 o = pslg.points[shared];
          bad = orient2d(o, other_s, other_t) == 0 && dot(other_s - o, other_t - o) > 0.0;
        } else {
          bad = true;  // duplicate segment
        }
        if (bad)
          throw MeshgenError("PSLG segments " + std::to_string(bucket[i]) + " and " + std::to_string(bucket[j]) +
                             " intersect");
      }
    }
  }
}

void MeshgenParams::validate() const {
  if (!(max_area > 0.0)) throw MeshgenError("meshgen: max_area must be positive");
  if (!(min_angle_deg >= 0.0 && min_angle_deg < 28.6)) throw MeshgenError("meshgen: min_angle must lie in [0, 28.6)");
  if (!(smooth_lambda > 0.0 && smooth_lambda < 1.0)) throw MeshgenError("meshgen: smooth_lambda must lie in (0, 1)");
  if (min_component_cells < 0.0) throw MeshgenError("meshgen: min_component_cells must be nonnegative");
}

}  // namespace bbmwave
