#include "bbmwave/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace bbmwave {

std::array<Point2, 3> Mesh::corners(std::size_t t) const {
  const auto& tri = triangles[t];
  return {point(tri.v[0]), point(tri.v[1]), point(tri.v[2])};
}

double Mesh::h() const {
  double h = 0.0;
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    const auto c = corners(t);
    h = std::max({h, distance(c[0], c[1]), distance(c[1], c[2]), distance(c[2], c[0])});
  }
  return h;
}

BoundingBox bounding_box(const Mesh& mesh) {
  if (mesh.vertices.empty()) return {};
  BoundingBox box{mesh.point(0), mesh.point(0)};
  for (const auto& v : mesh.vertices) {
    box.lo.x = std::min(box.lo.x, v.position.x);
    box.lo.y = std::min(box.lo.y, v.position.y);
    box.hi.x = std::max(box.hi.x, v.position.x);
    box.hi.y = std::max(box.hi.y, v.position.y);
  }
  return box;
}

MeshTolerances tolerances(const Mesh& mesh) {
  const auto box = bounding_box(mesh);
  return {1e-14 * box.area(), 1e-12, 1e-10 * box.diameter()};
}

MeshFormatError::MeshFormatError(std::size_t line, const std::string& what)
    : MeshError("line " + std::to_string(line) + ": " + what), line_(line) {}

DegenerateTriangleError::DegenerateTriangleError(std::size_t triangle, double area)
    : MeshError("degenerate triangle " + std::to_string(triangle) + " (area " +
                std::to_string(area) + ")"),
      triangle_(triangle) {}

TriangleGeometry triangle_geometry(const Mesh& mesh, std::size_t t) {
  const auto [p0, p1, p2] = mesh.corners(t);
  const double area2 = signed_area2(p0, p1, p2);
  const double area = 0.5 * area2;
  if (!(area > tolerances(mesh).area)) throw DegenerateTriangleError(t, area);

  // grad(lambda_i) = perp(p_k - p_j) / (2 A) for (i, j, k) cyclic.
  auto grad = [area2](Point2 pj, Point2 pk) {
    return Vec2{(pj.y - pk.y) / area2, (pk.x - pj.x) / area2};
  };
  return {area, {grad(p1, p2), grad(p2, p0), grad(p0, p1)}};
}

namespace {

using EdgeKey = std::pair<std::size_t, std::size_t>;

EdgeKey edge_key(std::size_t a, std::size_t b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

std::string describe_edge(std::size_t a, std::size_t b) {
  std::ostringstream os;
  os << "(" << a << ", " << b << ")";
  return os.str();
}

}  // namespace

std::vector<Violation> validate(const Mesh& mesh) {
  using Kind = Violation::Kind;
  std::vector<Violation> out;
  const std::size_t nv = mesh.vertices.size();
  const auto tol = tolerances(mesh);

  for (std::size_t i = 0; i < nv; ++i) {
    const auto& v = mesh.vertices[i];
    if (!is_finite(v.position))
      out.push_back({Kind::non_finite_vertex, i, "vertex " + std::to_string(i) + " is not finite"});
    if (v.label < 0)
      out.push_back({Kind::negative_label, i, "vertex " + std::to_string(i) + " has a negative label"});
  }

  // Directed half-edges per undirected edge, in triangle order.
  std::map<EdgeKey, std::vector<std::pair<std::size_t, bool>>> edges;
  std::vector<bool> used(nv, false);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    const std::string name = "triangle " + std::to_string(t);
    if (std::any_of(tri.v.begin(), tri.v.end(), [nv](std::size_t i) { return i >= nv; })) {
      out.push_back({Kind::triangle_index_out_of_range, t, name + " references a missing vertex"});
      continue;
    }
    for (auto i : tri.v) used[i] = true;
    if (tri.v[0] == tri.v[1] || tri.v[1] == tri.v[2] || tri.v[0] == tri.v[2]) {
      out.push_back({Kind::triangle_repeated_vertex, t, name + " repeats a vertex"});
      continue;
    }
    const auto [p0, p1, p2] = mesh.corners(t);
    const double area = 0.5 * signed_area2(p0, p1, p2);
    if (std::abs(area) <= tol.area) {
      out.push_back({Kind::degenerate_triangle, t, name + " is degenerate"});
    } else if (area < 0.0) {
      out.push_back({Kind::clockwise_triangle, t, name + " is clockwise"});
    }
    for (int k = 0; k < 3; ++k) {
      const std::size_t a = tri.v[k];
      const std::size_t b = tri.v[(k + 1) % 3];
      edges[edge_key(a, b)].push_back({t, a < b});
    }
  }

  for (const auto& [key, owners] : edges) {
    if (owners.size() > 2) {
      out.push_back({Kind::nonconforming_edge, owners[2].first,
                     "edge " + describe_edge(key.first, key.second) + " is shared by " +
                         std::to_string(owners.size()) + " triangles"});
    } else if (owners.size() == 2 && owners[0].second == owners[1].second) {
      out.push_back({Kind::inconsistent_edge_orientation, owners[1].first,
                     "edge " + describe_edge(key.first, key.second) +
                         " is traversed in the same direction by both triangles"});
    }
  }

  for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
    const auto& be = mesh.boundary_edges[e];
    const std::string name = "boundary edge " + std::to_string(e);
    if (be.v[0] >= nv || be.v[1] >= nv) {
      out.push_back({Kind::boundary_edge_index_out_of_range, e, name + " references a missing vertex"});
      continue;
    }
    const auto it = edges.find(edge_key(be.v[0], be.v[1]));
    if (it == edges.end() || it->second.size() != 1)
      out.push_back({Kind::boundary_edge_not_on_boundary, e, name + " does not lie on exactly one triangle"});
  }

  for (std::size_t i = 0; i < nv; ++i) {
    if (!used[i])
      out.push_back({Kind::orphan_vertex, i, "vertex " + std::to_string(i) + " belongs to no triangle"});
  }
  return out;
}

std::vector<std::array<std::size_t, 2>> unlabeled_boundary_edges(const Mesh& mesh) {
  std::map<EdgeKey, int> count;
  for (const auto& tri : mesh.triangles)
    for (int k = 0; k < 3; ++k) ++count[edge_key(tri.v[k], tri.v[(k + 1) % 3])];
  std::set<EdgeKey> labeled;
  for (const auto& be : mesh.boundary_edges) labeled.insert(edge_key(be.v[0], be.v[1]));
  std::vector<std::array<std::size_t, 2>> out;
  for (const auto& [key, n] : count)
    if (n == 1 && !labeled.contains(key)) out.push_back({key.first, key.second});
  return out;
}

std::vector<std::size_t> boundary_nodes(const Mesh& mesh, std::span<const int> wanted) {
  std::vector<std::size_t> out;
  for (const auto& be : mesh.boundary_edges) {
    if (std::find(wanted.begin(), wanted.end(), be.label) == wanted.end()) continue;
    out.push_back(be.v[0]);
    out.push_back(be.v[1]);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<int> boundary_labels(const Mesh& mesh) {
  std::vector<int> out;
  for (const auto& be : mesh.boundary_edges) out.push_back(be.label);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double total_area(const Mesh& mesh) {
  double sum = 0.0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto [p0, p1, p2] = mesh.corners(t);
    sum += 0.5 * signed_area2(p0, p1, p2);
  }
  return sum;
}

Mesh rectangle_mesh(Point2 lo, Point2 hi, std::size_t nx, std::size_t ny,
                    const RectangleLabels& side) {
  if (nx == 0 || ny == 0) throw MeshError("rectangle_mesh needs at least one cell per direction");
  if (!(hi.x > lo.x && hi.y > lo.y)) throw MeshError("rectangle_mesh needs a nonempty box");
  Mesh mesh;
  const auto node = [nx](std::size_t i, std::size_t j) { return j * (nx + 1) + i; };
  mesh.vertices.reserve((nx + 1) * (ny + 1));
  for (std::size_t j = 0; j <= ny; ++j) {
    // Pin the last coordinate to the box exactly.
    const double y = j == ny ? hi.y : lo.y + (hi.y - lo.y) * static_cast<double>(j) / ny;
    for (std::size_t i = 0; i <= nx; ++i) {
      const double x = i == nx ? hi.x : lo.x + (hi.x - lo.x) * static_cast<double>(i) / nx;
      int label = labels::interior;
      if (j == 0) label = side.bottom;
      else if (j == ny) label = side.top;
      else if (i == 0) label = side.left;
      else if (i == nx) label = side.right;
      mesh.vertices.push_back({{x, y}, label});
    }
  }
  mesh.triangles.reserve(2 * nx * ny);
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const auto a = node(i, j), b = node(i + 1, j), c = node(i + 1, j + 1), d = node(i, j + 1);
      mesh.triangles.push_back({{a, b, c}, 0});
      mesh.triangles.push_back({{a, c, d}, 0});
    }
  }
  for (std::size_t i = 0; i < nx; ++i) mesh.boundary_edges.push_back({{node(i, 0), node(i + 1, 0)}, side.bottom});
  for (std::size_t j = 0; j < ny; ++j) mesh.boundary_edges.push_back({{node(nx, j), node(nx, j + 1)}, side.right});
  for (std::size_t i = nx; i > 0; --i) mesh.boundary_edges.push_back({{node(i, ny), node(i - 1, ny)}, side.top});
  for (std::size_t j = ny; j > 0; --j) mesh.boundary_edges.push_back({{node(0, j), node(0, j - 1)}, side.left});
  return mesh;
}

}  // namespace bbmwave
