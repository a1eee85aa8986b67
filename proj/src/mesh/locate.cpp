#include <algorithm>
#include <limits>
#include <map>

#include "bbmwave/mesh.hpp"

namespace bbmwave {

std::array<double, 3> barycentric(const Mesh& mesh, std::size_t t, Point2 p) {
  const auto [p0, p1, p2] = mesh.corners(t);
  const double area2 = cross(p1 - p0, p2 - p0);
  // Same expression as area2 when p coincides with a vertex, so vertices map
  // to exact unit coordinates.
  const double l0 = cross(p1 - p, p2 - p) / area2;
  const double l1 = cross(p2 - p, p0 - p) / area2;
  return {l0, l1, 1.0 - l0 - l1};
}

PointLocator::PointLocator(const Mesh& mesh) : mesh_(&mesh), tol_(tolerances(mesh)) {
  neighbors_.assign(mesh.triangles.size(), {-1, -1, -1});
  std::map<std::pair<std::size_t, std::size_t>, std::pair<std::size_t, int>> open;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& v = mesh.triangles[t].v;
    for (int k = 0; k < 3; ++k) {
      // Edge opposite local vertex k.
      std::size_t a = v[(k + 1) % 3], b = v[(k + 2) % 3];
      if (a > b) std::swap(a, b);
      auto [it, inserted] = open.try_emplace({a, b}, t, k);
      if (!inserted) {
        neighbors_[t][k] = static_cast<std::ptrdiff_t>(it->second.first);
        neighbors_[it->second.first][it->second.second] = static_cast<std::ptrdiff_t>(t);
        open.erase(it);
      }
    }
  }
}

std::optional<Location> PointLocator::locate(Point2 p, std::size_t start) const {
  if (mesh_->triangles.empty() || !is_finite(p)) return std::nullopt;
  if (start >= mesh_->triangles.size()) start = 0;
  if (auto hit = walk(p, start)) return hit;
  return scan(p);
}

std::optional<Location> PointLocator::walk(Point2 p, std::size_t start) const {
  std::size_t t = start;
  const std::size_t max_steps = mesh_->triangles.size() + 3;
  for (std::size_t step = 0; step < max_steps; ++step) {
    const auto& v = mesh_->triangles[t].v;
    int exit_edge = -1;
    for (int k = 0; k < 3; ++k) {
      const Point2 a = mesh_->point(v[(k + 1) % 3]);
      const Point2 b = mesh_->point(v[(k + 2) % 3]);
      if (orient2d(a, b, p) < 0) {
        exit_edge = k;
        break;
      }
    }
    if (exit_edge < 0) return Location{t, barycentric(*mesh_, t, p)};
    const auto next = neighbors_[t][exit_edge];
    if (next < 0) return std::nullopt;
    t = static_cast<std::size_t>(next);
  }
  return std::nullopt;
}

std::optional<Location> PointLocator::scan(Point2 p) const {
  std::optional<Location> best;
  double best_min = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < mesh_->triangles.size(); ++t) {
    const auto [p0, p1, p2] = mesh_->corners(t);
    const double slack = tol_.geometric;
    if (p.x < std::min({p0.x, p1.x, p2.x}) - slack || p.x > std::max({p0.x, p1.x, p2.x}) + slack ||
        p.y < std::min({p0.y, p1.y, p2.y}) - slack || p.y > std::max({p0.y, p1.y, p2.y}) + slack)
      continue;
    const auto bary = barycentric(*mesh_, t, p);
    const double lo = std::min({bary[0], bary[1], bary[2]});
    if (lo > best_min) {
      best_min = lo;
      best = Location{t, bary};
    }
  }
  if (best && best_min >= -tol_.barycentric) return best;
  return std::nullopt;
}

std::optional<Location> locate_point(const Mesh& mesh, Point2 p) { return PointLocator(mesh).locate(p); }

}  // namespace bbmwave
