#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <unordered_map>
#include <vector>

#include "bbmwave/geometry.hpp"
#include "bbmwave/meshgen.hpp"

namespace bbmwave::detail {

inline constexpr std::size_t kNone = SIZE_MAX;

/// Incremental constrained Delaunay triangulation inside a large enclosing
/// triangle, with conforming segment recovery and Delaunay refinement.
class RefiningTriangulation {
 public:
  RefiningTriangulation(const PSLG& pslg, const MeshgenParams& params);

  /// Inserts the PSLG, recovers its segments and marks the enclosed region.
  void build();
  void refine();
  Mesh extract() const;

 private:
  struct Tri {
    std::array<std::size_t, 3> v{};
    std::array<std::size_t, 3> n{kNone, kNone, kNone};  // neighbor across the edge opposite v[i]
    std::array<bool, 3> fixed{false, false, false};     // edge opposite v[i] is a constrained subsegment
    bool interior = false;
  };

  struct VertexInfo {
    Point2 p;
    bool input = false;             // PSLG point (or enclosing-triangle corner)
    std::size_t segment = kNone;    // parent input segment for split points
  };

  struct SegmentInfo {
    int label = 0;
    std::size_t parent = kNone;
  };

  enum class LocKind { inside, on_edge, on_vertex, blocked, outside };
  struct Loc {
    LocKind kind;
    std::size_t tri;
    int local;  // edge (opposite local vertex) or vertex index
  };

  static std::uint64_t key(std::size_t a, std::size_t b);

  Point2 pt(std::size_t v) const { return verts_[v].p; }
  int local_index(std::size_t t, std::size_t v) const;
  void set_neighbor(std::size_t t, std::size_t old_nbr, std::size_t new_nbr);
  bool is_fixed(std::size_t a, std::size_t b) const { return segs_.contains(key(a, b)); }

  std::size_t add_vertex(Point2 p);
  std::size_t new_tri();
  void check_budget() const;

  /// Walk from start toward p. With stop_at_constraints the walk refuses to
  /// cross subsegments and reports the blocking edge.
  Loc locate(Point2 p, std::size_t start, bool stop_at_constraints) const;

  std::size_t insert_point(Point2 p, std::size_t hint);  // returns existing vertex on coincidence
  std::size_t insert_in_triangle(std::size_t t, Point2 p);
  std::size_t split_edge(std::size_t t, int k, Point2 p);
  void legalize(std::vector<std::pair<std::size_t, std::size_t>> stack, std::size_t p);
  void flip(std::size_t t, int k);

  /// (triangle, local index of the vertex opposite edge ab) or kNone.
  std::pair<std::size_t, int> find_edge(std::size_t a, std::size_t b) const;
  void mark_fixed(std::size_t a, std::size_t b, const SegmentInfo& info);
  void recover_segment(std::size_t a, std::size_t b, const SegmentInfo& info);
  Point2 split_point(std::size_t a, std::size_t b) const;
  std::size_t split_subsegment(std::size_t a, std::size_t b);

  void classify();

  bool encroached(std::size_t a, std::size_t b) const;
  bool is_bad(std::size_t t) const;
  bool exempt_small_angle(std::size_t t) const;
  void queue_after_change();

  const PSLG& pslg_;
  MeshgenParams params_;
  std::vector<VertexInfo> verts_;
  std::vector<std::size_t> vtri_;
  std::vector<Tri> tris_;
  std::unordered_map<std::uint64_t, SegmentInfo> segs_;
  std::vector<std::size_t> input_vertex_;             // PSLG point -> vertex
  std::vector<std::vector<std::size_t>> input_segments_at_;  // vertex -> incident input segments
  std::vector<std::size_t> touched_;
  std::deque<std::pair<std::size_t, std::size_t>> seg_queue_;
  std::deque<std::pair<std::size_t, std::array<std::size_t, 3>>> tri_queue_;
  double min_length_ = 0.0;
  std::size_t last_ = 0;
};

}  // namespace bbmwave::detail
