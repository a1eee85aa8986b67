#include "bbmwave/bathymetry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <set>
#include <string>

namespace bbmwave {

void ProjectionSpec::validate() const {
  if (!(earth_radius_km > 0.0)) throw BathymetryError("projection: earth radius must be positive");
  if (!(km_per_degree > 0.0)) throw BathymetryError("projection: km per degree must be positive");
}

double km_per_degree_latitude(double earth_radius_km) { return std::numbers::pi * earth_radius_km / 180.0; }

Point2 project_point(double lon_deg, double lat_deg, const ProjectionSpec& spec) {
  if (spec.mode == ProjectionMode::uniform_per_degree)
    return {lon_deg * spec.km_per_degree, lat_deg * spec.km_per_degree};
  const double per_degree = km_per_degree_latitude(spec.earth_radius_km);
  const double lon_scale = std::cos(spec.ref_lat_deg * std::numbers::pi / 180.0);
  return {lon_deg * lon_scale * per_degree, lat_deg * per_degree};
}

namespace {

bool parse_double(std::string_view token, double& out) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size() && std::isfinite(out);
}

struct Row {
  double lon, lat, z;
};

std::size_t axis_index(const std::vector<double>& axis, double value) {
  return static_cast<std::size_t>(std::lower_bound(axis.begin(), axis.end(), value) - axis.begin());
}

}  // namespace

GeoGrid parse_xyz(std::istream& in) {
  std::vector<Row> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::vector<std::string_view> tokens;
    std::size_t pos = 0;
    auto is_sep = [](char c) { return c == ',' || std::isspace(static_cast<unsigned char>(c)); };
    while (pos < line.size()) {
      while (pos < line.size() && is_sep(line[pos])) ++pos;
      const std::size_t start = pos;
      while (pos < line.size() && !is_sep(line[pos])) ++pos;
      if (pos > start) tokens.emplace_back(line.data() + start, pos - start);
    }
    if (tokens.empty() || tokens.front().front() == '#') continue;
    if (tokens.size() != 3)
      throw BathymetryError("xyz line " + std::to_string(line_no) + ": expected 3 values, found " +
                            std::to_string(tokens.size()));
    Row row{};
    double* fields[] = {&row.lon, &row.lat, &row.z};
    for (int k = 0; k < 3; ++k) {
      if (!parse_double(tokens[k], *fields[k]))
        throw BathymetryError("xyz line " + std::to_string(line_no) + ": non-numeric value '" +
                              std::string(tokens[k]) + "'");
    }
    rows.push_back(row);
  }

  GeoGrid grid;
  for (const auto& r : rows) {
    grid.xs.push_back(r.lon);
    grid.ys.push_back(r.lat);
  }
  std::sort(grid.xs.begin(), grid.xs.end());
  grid.xs.erase(std::unique(grid.xs.begin(), grid.xs.end()), grid.xs.end());
  std::sort(grid.ys.begin(), grid.ys.end());
  grid.ys.erase(std::unique(grid.ys.begin(), grid.ys.end()), grid.ys.end());
  if (grid.xs.size() < 2 || grid.ys.size() < 2)
    throw BathymetryError("xyz grid needs at least two distinct longitudes and latitudes");

  grid.z.assign(grid.xs.size() * grid.ys.size(), 0.0);
  std::vector<bool> seen(grid.z.size(), false);
  for (const auto& r : rows) {
    const auto k = axis_index(grid.ys, r.lat) * grid.xs.size() + axis_index(grid.xs, r.lon);
    if (seen[k])
      throw BathymetryError("xyz grid has a duplicate point at lon " + std::to_string(r.lon) + ", lat " +
                            std::to_string(r.lat));
    seen[k] = true;
    grid.z[k] = r.z / 1000.0;
  }
  if (rows.size() != grid.z.size())
    throw BathymetryError("xyz grid is incomplete: " + std::to_string(grid.xs.size()) + " longitudes x " +
                          std::to_string(grid.ys.size()) + " latitudes but " + std::to_string(rows.size()) +
                          " rows");
  return grid;
}

GeoGrid parse_xyz_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BathymetryError("cannot open xyz file '" + path + "'");
  return parse_xyz(in);
}

PlanarGrid project(const GeoGrid& grid, const ProjectionSpec& spec) {
  spec.validate();
  PlanarGrid out;
  out.z = grid.z;
  out.xs.reserve(grid.xs.size());
  out.ys.reserve(grid.ys.size());
  // Both projection modes are separable, so axes map independently.
  for (double lon : grid.xs) out.xs.push_back(project_point(lon, 0.0, spec).x);
  for (double lat : grid.ys) out.ys.push_back(project_point(0.0, lat, spec).y);
  return out;
}

namespace {
void clamp_values(std::vector<double>& z, double cap) {
  for (auto& v : z) v = std::min(v, cap);
}
}  // namespace

GeoGrid clamp_depth(GeoGrid grid, double z_cap_km) {
  clamp_values(grid.z, z_cap_km);
  return grid;
}

PlanarGrid clamp_depth(PlanarGrid grid, double z_cap_km) {
  clamp_values(grid.z, z_cap_km);
  return grid;
}

double sample_bilinear(const ElevationGrid& grid, Point2 p) {
  const auto locate_axis = [](const std::vector<double>& axis, double v, std::size_t& cell, double& t) {
    v = std::clamp(v, axis.front(), axis.back());
    auto it = std::upper_bound(axis.begin(), axis.end(), v);
    std::size_t hi = static_cast<std::size_t>(it - axis.begin());
    hi = std::clamp<std::size_t>(hi, 1, axis.size() - 1);
    cell = hi - 1;
    t = (v - axis[cell]) / (axis[hi] - axis[cell]);
  };
  std::size_t ix = 0, iy = 0;
  double tx = 0.0, ty = 0.0;
  locate_axis(grid.xs, p.x, ix, tx);
  locate_axis(grid.ys, p.y, iy, ty);
  const double z00 = grid.at(iy, ix), z10 = grid.at(iy, ix + 1);
  const double z01 = grid.at(iy + 1, ix), z11 = grid.at(iy + 1, ix + 1);
  // lerp is exact at the cell corners and on constant data.
  return std::lerp(std::lerp(z00, z10, tx), std::lerp(z01, z11, tx), ty);
}

DryZoneError::DryZoneError(std::vector<std::size_t> nodes)
    : BathymetryError([&] {
        std::string msg = "no-dry-zone violation: depth <= 0 at " + std::to_string(nodes.size()) + " node(s):";
        for (std::size_t k = 0; k < std::min<std::size_t>(nodes.size(), 10); ++k) msg += " " + std::to_string(nodes[k]);
        if (nodes.size() > 10) msg += " ...";
        return msg;
      }()),
      nodes_(std::move(nodes)) {}

BathymetryField make_bathymetry(const Mesh& mesh, std::vector<double> depth) {
  if (depth.size() != mesh.vertices.size())
    throw BathymetryError("depth array length does not match the mesh vertex count");
  std::vector<std::size_t> dry;
  for (std::size_t i = 0; i < depth.size(); ++i)
    if (!(depth[i] > 0.0)) dry.push_back(i);
  if (!dry.empty()) throw DryZoneError(std::move(dry));

  BathymetryField field;
  field.grad_depth2.reserve(mesh.triangles.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto geo = triangle_geometry(mesh, t);
    const auto& v = mesh.triangles[t].v;
    // Offsetting by the first vertex keeps constant depth exactly gradient-free.
    const double ref = depth[v[0]] * depth[v[0]];
    Vec2 g{0.0, 0.0};
    for (int k = 1; k < 3; ++k) g = g + (depth[v[k]] * depth[v[k]] - ref) * geo.grad[k];
    field.grad_depth2.push_back(g);
  }
  field.depth = std::move(depth);
  return field;
}

BathymetryField flat_bathymetry(const Mesh& mesh, double depth) {
  return make_bathymetry(mesh, std::vector<double>(mesh.vertices.size(), depth));
}

BathymetryField bind_to_mesh(const PlanarGrid& grid, const Mesh& mesh) {
  std::vector<double> depth(mesh.vertices.size());
  for (std::size_t i = 0; i < depth.size(); ++i) depth[i] = -sample_bilinear(grid, mesh.point(i));
  return make_bathymetry(mesh, std::move(depth));
}

}  // namespace bbmwave
