#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "bbmwave/bathymetry.hpp"
#include "bbmwave/geometry.hpp"
#include "bbmwave/mesh.hpp"

namespace bbmwave {

class MeshgenError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Grayscale image, row-major from the top row.
struct Raster {
  std::size_t width = 0;
  std::size_t height = 0;
  std::uint32_t maxval = 255;
  std::vector<std::uint16_t> pixels;

  std::uint16_t at(std::size_t row, std::size_t col) const { return pixels[row * width + col]; }

  friend bool operator==(const Raster&, const Raster&) = default;
};

/// Reads a PGM image in plain (P2) or binary (P5) form.
Raster read_pgm(std::istream& in);
Raster read_pgm_file(const std::string& path);

/// Scalar field on a rectilinear grid whose negative region is wet. Same
/// layout as ElevationGrid: values[iy * xs.size() + ix].
struct LevelGrid {
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<double> values;

  double at(std::size_t iy, std::size_t ix) const { return values[iy * xs.size() + ix]; }
  BoundingBox box() const { return {{xs.front(), ys.front()}, {xs.back(), ys.back()}}; }
  /// Largest cell side along either axis.
  double cell_size() const;
};

struct RasterLevelOptions {
  double wet_threshold = 127.5;
  bool wet_is_dark = true;   // water pixels darker than the threshold
  double pixel_size = 1.0;   // user units per pixel
};

/// Pixel centers become grid nodes; image rows run north to south, so row 0
/// maps to the largest y.
LevelGrid raster_to_level(const Raster& raster, const RasterLevelOptions& options = {});

/// Level equals elevation: wet where z < 0.
LevelGrid bathy_to_level(const PlanarGrid& grid);

struct Polyline {
  std::vector<Point2> points;
  bool closed = false;

  double length() const;
  /// Signed shoelace area (closed polylines only).
  double signed_area() const;
};

/// Iso-contours by marching squares. Contours keep the region below iso on
/// their left; they are closed unless they end on the grid boundary.
std::vector<Polyline> marching_squares(const LevelGrid& level, double iso = 0.0);

/// Laplacian smoothing: iters passes of p_i += (lambda/2)(p_{i-1} + p_{i+1} - 2 p_i).
/// Open polylines keep their endpoints.
Polyline smooth_polyline(const Polyline& poly, std::size_t iters, double lambda);

/// Douglas-Peucker simplification with tolerance eps. Closed polylines are
/// split at their farthest-point pair first.
Polyline simplify_polyline(const Polyline& poly, double eps);

struct PslgSegment {
  std::size_t a;
  std::size_t b;
  int label;
};

/// Planar straight-line graph of labeled segments bounding the wet region.
struct PSLG {
  std::vector<Point2> points;
  std::vector<PslgSegment> segments;
};

enum class OpenSeaRule {
  box_is_open_sea,  // wet stretches of the grid box become label 2
  all_shoreline,    // every boundary segment is label 1
};

struct PslgOptions {
  OpenSeaRule open_sea = OpenSeaRule::box_is_open_sea;
  double min_component_area = 0.0;  // loops enclosing less area are dropped
};

/// Closes open contours along the grid box and labels every segment. The
/// level grid decides which stretches of the box are wet.
PSLG build_pslg(const std::vector<Polyline>& contours, const LevelGrid& level, const PslgOptions& options = {});

/// Throws MeshgenError naming the first pair of segments that intersect
/// anywhere other than a shared endpoint.
void check_pslg(const PSLG& pslg);

struct MeshgenParams {
  double max_area = 0.0;  // required, > 0
  double min_angle_deg = 20.0;
  std::size_t smooth_iters = 10;
  double smooth_lambda = 0.5;
  double simplify_eps = -1.0;       // < 0: half a grid cell
  double min_component_cells = 25;  // wet components below this many cells are dropped
  std::size_t max_elements = 10'000'000;

  void validate() const;
};

/// Constrained Delaunay triangulation of the region enclosed by the PSLG,
/// refined by Ruppert's algorithm.
Mesh triangulate_pslg(const PSLG& pslg, const MeshgenParams& params);

struct MeshgenReport {
  std::size_t contours = 0;
  std::size_t pslg_points = 0;
  std::size_t pslg_segments = 0;
  double min_angle_deg = 0.0;
  double wet_area = 0.0;
  std::size_t shoreline_edges = 0;
  std::size_t open_sea_edges = 0;
};

/// Full pipeline from a level grid to a labeled mesh.
Mesh generate_mesh(const LevelGrid& level, const MeshgenParams& params, OpenSeaRule open_sea,
                   MeshgenReport* report = nullptr);

/// Smallest angle over all mesh triangles, in degrees.
double mesh_min_angle(const Mesh& mesh);

}  // namespace bbmwave
