#include <algorithm>
#include <limits>
#include <map>

#include "bbmwave/meshgen.hpp"

namespace bbmwave {

namespace {

// Crossings are kept strictly inside their grid edge so that contours from
// different cells never share a point by accident.
constexpr double kEdgeClamp = 1e-9;

class ContourTracer {
 public:
  ContourTracer(const LevelGrid& level, double iso) : g_(level), iso_(iso), nx_(level.xs.size()), ny_(level.ys.size()) {
    horizontal_count_ = (nx_ - 1) * ny_;
  }

  std::vector<Polyline> trace() {
    for (std::size_t iy = 0; iy + 1 < ny_; ++iy)
      for (std::size_t ix = 0; ix + 1 < nx_; ++ix) process_cell(ix, iy);

    std::vector<Polyline> out;
    std::map<std::size_t, std::size_t> incoming;  // end edge -> start edge
    for (const auto& [from, to] : next_) incoming[to] = from;

    // Open chains start at crossings nobody leads into.
    for (const auto& [start, _] : next_) {
      if (incoming.contains(start)) continue;
      Polyline poly;
      std::size_t e = start;
      poly.points.push_back(crossing(e));
      while (true) {
        visited_.push_back(e);
        const auto it = next_.find(e);
        if (it == next_.end()) break;
        e = it->second;
        poly.points.push_back(crossing(e));
      }
      out.push_back(std::move(poly));
    }
    std::sort(visited_.begin(), visited_.end());
    for (const auto& [start, _] : next_) {
      if (std::binary_search(visited_.begin(), visited_.end(), start)) continue;
      Polyline poly;
      poly.closed = true;
      std::size_t e = start;
      do {
        poly.points.push_back(crossing(e));
        mark(e);
        e = next_.at(e);
      } while (e != start);
      out.push_back(std::move(poly));
    }
    return out;
  }

 private:
  bool wet(std::size_t ix, std::size_t iy) const { return g_.at(iy, ix) < iso_; }

  // Edge ids: horizontal edge (ix, iy)-(ix+1, iy), then vertical (ix, iy)-(ix, iy+1).
  std::size_t h_edge(std::size_t ix, std::size_t iy) const { return iy * (nx_ - 1) + ix; }
  std::size_t v_edge(std::size_t ix, std::size_t iy) const { return horizontal_count_ + iy * nx_ + ix; }

  Point2 crossing(std::size_t e) {
    if (auto it = points_.find(e); it != points_.end()) return it->second;
    std::size_t ix0, iy0, ix1, iy1;
    if (e < horizontal_count_) {
      iy0 = iy1 = e / (nx_ - 1);
      ix0 = e % (nx_ - 1);
      ix1 = ix0 + 1;
    } else {
      const std::size_t k = e - horizontal_count_;
      iy0 = k / nx_;
      ix0 = ix1 = k % nx_;
      iy1 = iy0 + 1;
    }
    const double v0 = g_.at(iy0, ix0);
    const double v1 = g_.at(iy1, ix1);
    const double t = std::clamp((iso_ - v0) / (v1 - v0), kEdgeClamp, 1.0 - kEdgeClamp);
    const Point2 p0{g_.xs[ix0], g_.ys[iy0]};
    const Point2 p1{g_.xs[ix1], g_.ys[iy1]};
    Point2 p{p0.x + t * (p1.x - p0.x), p0.y + t * (p1.y - p0.y)};
    // Keep the fixed coordinate bit-exact.
    if (iy0 == iy1) p.y = p0.y;
    if (ix0 == ix1) p.x = p0.x;
    points_.emplace(e, p);
    return p;
  }

  void mark(std::size_t e) { visited_.insert(std::upper_bound(visited_.begin(), visited_.end(), e), e); }

  void process_cell(std::size_t ix, std::size_t iy) {
    // Corners counterclockwise from bottom-left; side k runs from corner k to k+1.
    const bool w[4] = {wet(ix, iy), wet(ix + 1, iy), wet(ix + 1, iy + 1), wet(ix, iy + 1)};
    const std::size_t side[4] = {h_edge(ix, iy), v_edge(ix + 1, iy), h_edge(ix, iy + 1), v_edge(ix, iy)};
    std::size_t exits[2], entries[2];
    int n_exit = 0, n_entry = 0;
    int exit_pos[2], entry_pos[2];
    for (int k = 0; k < 4; ++k) {
      const bool a = w[k], b = w[(k + 1) % 4];
      if (a && !b) {
        exit_pos[n_exit] = k;
        exits[n_exit++] = side[k];
      } else if (!a && b) {
        entry_pos[n_entry] = k;
        entries[n_entry++] = side[k];
      }
    }
    if (n_exit == 0) return;
    if (n_exit == 1) {
      next_[exits[0]] = entries[0];
      return;
    }
    // Saddle: the cell-center average decides whether the wet corners connect.
    const double center = 0.25 * (g_.at(iy, ix) + g_.at(iy, ix + 1) + g_.at(iy + 1, ix + 1) + g_.at(iy + 1, ix));
    const bool center_wet = center < iso_;
    for (int i = 0; i < 2; ++i) {
      // Entry following (center wet) or preceding (center dry) this exit when
      // walking the cell boundary counterclockwise.
      int best = 0;
      int best_dist = 5;
      for (int j = 0; j < 2; ++j) {
        const int forward = (entry_pos[j] - exit_pos[i] + 4) % 4;
        const int dist = center_wet ? forward : (4 - forward) % 4;
        if (dist > 0 && dist < best_dist) {
          best_dist = dist;
          best = j;
        }
      }
      next_[exits[i]] = entries[best];
    }
  }

  const LevelGrid& g_;
  double iso_;
  std::size_t nx_, ny_;
  std::size_t horizontal_count_ = 0;
  std::map<std::size_t, std::size_t> next_;
  std::map<std::size_t, Point2> points_;
  std::vector<std::size_t> visited_;
};

}  // namespace

std::vector<Polyline> marching_squares(const LevelGrid& level, double iso) {
  if (level.xs.size() < 2 || level.ys.size() < 2) throw MeshgenError("marching_squares: grid needs at least 2x2 nodes");
  if (level.values.size() != level.xs.size() * level.ys.size())
    throw MeshgenError("marching_squares: value array does not match the axes");
  return ContourTracer(level, iso).trace();
}

}  // namespace bbmwave
