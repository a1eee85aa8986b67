#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "bbmwave/geometry.hpp"
#include "bbmwave/mesh.hpp"

namespace bbmwave {

class BathymetryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rectilinear grid of elevations. Row-major with latitude (y) as the slow
/// index: value(iy, ix) = z[iy * xs.size() + ix]. Elevations are in km,
/// negative below sea level.
struct ElevationGrid {
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<double> z;

  std::size_t nx() const { return xs.size(); }
  std::size_t ny() const { return ys.size(); }
  double& at(std::size_t iy, std::size_t ix) { return z[iy * xs.size() + ix]; }
  double at(std::size_t iy, std::size_t ix) const { return z[iy * xs.size() + ix]; }

  friend bool operator==(const ElevationGrid&, const ElevationGrid&) = default;
};

/// Geographic grid: xs are longitudes and ys latitudes, in degrees.
struct GeoGrid : ElevationGrid {};

/// Planar grid: axes in km.
struct PlanarGrid : ElevationGrid {};

enum class ProjectionMode { earth_radius, uniform_per_degree };

struct ProjectionSpec {
  ProjectionMode mode = ProjectionMode::uniform_per_degree;
  double earth_radius_km = 6378.137;
  double ref_lat_deg = 0.0;
  double km_per_degree = 100.0;

  void validate() const;
};

/// km per degree of latitude on a sphere of radius R: pi * R / 180.
double km_per_degree_latitude(double earth_radius_km);

/// Planar position of a geographic point.
Point2 project_point(double lon_deg, double lat_deg, const ProjectionSpec& spec);

/// Reads "lon lat z" rows (whitespace or comma separated, z in meters) that
/// form a complete rectilinear grid in any order. Blank lines and lines
/// starting with '#' are skipped.
GeoGrid parse_xyz(std::istream& in);
GeoGrid parse_xyz_file(const std::string& path);

PlanarGrid project(const GeoGrid& grid, const ProjectionSpec& spec);

/// Default elevation cap: -10 m.
inline constexpr double kDefaultDepthCapKm = -0.010;

/// Replaces every elevation by min(z, z_cap).
GeoGrid clamp_depth(GeoGrid grid, double z_cap_km = kDefaultDepthCapKm);
PlanarGrid clamp_depth(PlanarGrid grid, double z_cap_km = kDefaultDepthCapKm);

/// Bilinear interpolation; points outside the grid box are clamped to it.
double sample_bilinear(const ElevationGrid& grid, Point2 p);

/// Nodal still-water depth and the per-triangle constant gradient of the P1
/// interpolant of nodal D^2.
struct BathymetryField {
  std::vector<double> depth;
  std::vector<Vec2> grad_depth2;
};

/// Thrown when a mesh node would sit on dry land (depth <= 0).
class DryZoneError : public BathymetryError {
 public:
  explicit DryZoneError(std::vector<std::size_t> nodes);
  const std::vector<std::size_t>& nodes() const { return nodes_; }

 private:
  std::vector<std::size_t> nodes_;
};

/// Builds the field from nodal depths; throws DryZoneError on depth <= 0.
BathymetryField make_bathymetry(const Mesh& mesh, std::vector<double> depth);

/// Constant depth everywhere.
BathymetryField flat_bathymetry(const Mesh& mesh, double depth);

/// D_i = -z(node_i) sampled from an already clamped grid.
BathymetryField bind_to_mesh(const PlanarGrid& grid, const Mesh& mesh);

}  // namespace bbmwave
