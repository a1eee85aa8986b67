#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bbmwave/geometry.hpp"

namespace bbmwave {

/// Boundary label conventions used by the mesh generator and the scenarios.
namespace labels {
inline constexpr int interior = 0;
inline constexpr int shoreline = 1;
inline constexpr int open_sea = 2;
}  // namespace labels

struct Vertex {
  Point2 position;
  int label = labels::interior;

  friend bool operator==(const Vertex&, const Vertex&) = default;
};

/// Vertex indices are counterclockwise.
struct Triangle {
  std::array<std::size_t, 3> v{};
  int region = 0;

  friend bool operator==(const Triangle&, const Triangle&) = default;
};

struct BoundaryEdge {
  std::array<std::size_t, 2> v{};
  int label = labels::shoreline;

  friend bool operator==(const BoundaryEdge&, const BoundaryEdge&) = default;
};

/// Unstructured triangle mesh with labeled boundary edges. Plain value type;
/// use validate() to check its invariants.
struct Mesh {
  std::vector<Vertex> vertices;
  std::vector<Triangle> triangles;
  std::vector<BoundaryEdge> boundary_edges;

  bool empty() const { return vertices.empty() && triangles.empty(); }
  Point2 point(std::size_t i) const { return vertices[i].position; }
  std::array<Point2, 3> corners(std::size_t t) const;

  /// Maximum triangle diameter (longest edge); 0 for an empty mesh.
  double h() const;

  friend bool operator==(const Mesh&, const Mesh&) = default;
};

struct BoundingBox {
  Point2 lo;
  Point2 hi;
  double width() const { return hi.x - lo.x; }
  double height() const { return hi.y - lo.y; }
  double area() const { return width() * height(); }
  double diameter() const { return std::hypot(width(), height()); }
};

BoundingBox bounding_box(const Mesh& mesh);

/// Scale-aware tolerances derived from the mesh bounding box.
struct MeshTolerances {
  double area;         // degenerate-triangle threshold
  double barycentric;  // point-location slack on barycentric coordinates
  double geometric;    // point reconstruction tolerance
};
MeshTolerances tolerances(const Mesh& mesh);

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown by read_msh; carries the 1-based line number of the offending line.
class MeshFormatError : public MeshError {
 public:
  MeshFormatError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class DegenerateTriangleError : public MeshError {
 public:
  DegenerateTriangleError(std::size_t triangle, double area);
  std::size_t triangle() const { return triangle_; }

 private:
  std::size_t triangle_;
};

/// Area and P1 hat-function gradients of one triangle. grad[i] belongs to
/// local vertex i; the gradients sum to zero.
struct TriangleGeometry {
  double area = 0.0;
  std::array<Vec2, 3> grad{};
};

TriangleGeometry triangle_geometry(const Mesh& mesh, std::size_t t);

struct Violation {
  enum class Kind {
    non_finite_vertex,
    negative_label,
    triangle_index_out_of_range,
    triangle_repeated_vertex,
    degenerate_triangle,
    clockwise_triangle,
    nonconforming_edge,
    inconsistent_edge_orientation,
    boundary_edge_index_out_of_range,
    boundary_edge_not_on_boundary,
    orphan_vertex,
  };
  Kind kind;
  std::size_t index;  // vertex, triangle or boundary-edge index depending on kind
  std::string message;
};

/// Empty iff every mesh invariant holds.
std::vector<Violation> validate(const Mesh& mesh);

/// Topological boundary edges (edges of exactly one triangle) that have no
/// labeled BoundaryEdge entry.
std::vector<std::array<std::size_t, 2>> unlabeled_boundary_edges(const Mesh& mesh);

/// Sorted vertex indices incident to a boundary edge whose label is listed.
std::vector<std::size_t> boundary_nodes(const Mesh& mesh, std::span<const int> labels);

/// Sorted distinct labels carried by the boundary edges.
std::vector<int> boundary_labels(const Mesh& mesh);

double total_area(const Mesh& mesh);

// Text format: "nv nt ne" header, nv lines "x y label", nt lines
// "i1 i2 i3 region", ne lines "i1 i2 label"; indices 1-based.
Mesh read_msh(std::istream& in);
Mesh read_msh_file(const std::string& path);
void write_msh(std::ostream& out, const Mesh& mesh);
std::string write_msh(const Mesh& mesh);
void write_msh_file(const std::string& path, const Mesh& mesh);

struct Location {
  std::size_t triangle = 0;
  std::array<double, 3> barycentric{};
};

/// Barycentric coordinates of p with respect to triangle t.
std::array<double, 3> barycentric(const Mesh& mesh, std::size_t t, Point2 p);

/// Point location by walking across triangle neighbors, with a brute-force
/// scan as fallback (nonconvex domains, holes). Immutable once built.
class PointLocator {
 public:
  explicit PointLocator(const Mesh& mesh);

  std::optional<Location> locate(Point2 p, std::size_t start = 0) const;

 private:
  std::optional<Location> walk(Point2 p, std::size_t start) const;
  std::optional<Location> scan(Point2 p) const;

  const Mesh* mesh_;
  std::vector<std::array<std::ptrdiff_t, 3>> neighbors_;  // opposite local vertex i; -1 on boundary
  MeshTolerances tol_;
};

std::optional<Location> locate_point(const Mesh& mesh, Point2 p);

/// Side labels for rectangle_mesh, in the order bottom, right, top, left.
struct RectangleLabels {
  int bottom = labels::shoreline;
  int right = labels::shoreline;
  int top = labels::shoreline;
  int left = labels::shoreline;
};

/// Structured nx-by-ny grid of cells over [lo, hi], each cell cut along its
/// lower-left to upper-right diagonal.
Mesh rectangle_mesh(Point2 lo, Point2 hi, std::size_t nx, std::size_t ny,
                    const RectangleLabels& side_labels = {});

}  // namespace bbmwave
