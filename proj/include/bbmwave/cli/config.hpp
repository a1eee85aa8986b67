#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bbmwave/bathymetry.hpp"
#include "bbmwave/fem.hpp"
#include "bbmwave/meshgen.hpp"
#include "bbmwave/scenarios.hpp"
#include "bbmwave/simulate.hpp"

namespace bbmwave::cli {

/// Configuration problem; line is 0 when the error is not tied to one line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct RectangleSource {
  Point2 lo;
  Point2 hi;
  std::size_t nx = 0;
  std::size_t ny = 0;
};

enum class ScenarioName { mediterranean, cyprus, standing_wave, rest };

const char* to_string(ScenarioName s);

struct RunConfig {
  // Exactly one mesh source.
  std::optional<std::filesystem::path> mesh_path;
  std::optional<std::filesystem::path> pgm_path;
  std::optional<std::filesystem::path> xyz_path;
  std::optional<RectangleSource> rectangle;

  ProjectionSpec projection;
  std::optional<std::filesystem::path> bathymetry_xyz;  // defaults to input.xyz when that is the mesh source
  std::optional<double> flat_depth;
  double depth_cap_km = kDefaultDepthCapKm;

  MeshgenParams meshgen;
  bool max_area_set = false;
  RasterLevelOptions raster;
  OpenSeaRule open_sea = OpenSeaRule::box_is_open_sea;
  std::optional<std::filesystem::path> meshgen_output;

  ModelParams model;

  std::optional<ScenarioName> scenario;
  CyprusVariant cyprus_variant = CyprusVariant::as_printed;
  double px = kMediterraneanPX;
  double py = kMediterraneanPY;
  double amplitude = 1e-5;
  int mode = 1;
  double depth0 = 1.0;

  std::optional<LabelSet> bc_eta;
  std::optional<LabelSet> bc_u;
  std::optional<LabelSet> bc_v;

  SimConfig sim;
  bool t_end_set = false;
  bool t_end_is_period = false;

  std::filesystem::path output_dir = "output";

  /// Keys in file order with their raw values, for the manifest echo.
  std::vector<std::pair<std::string, std::string>> entries;

  std::size_t mesh_sources() const;
};

/// Parses "section.key = value" lines; '#' starts a comment. Relative paths
/// are resolved against base_dir.
RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
RunConfig parse_config_file(const std::filesystem::path& path);

/// Checks the keys the meshgen command needs and that input files exist.
void require_for_meshgen(const RunConfig& config);
/// Checks the keys the run command needs and that input files exist.
void require_for_run(const RunConfig& config);

}  // namespace bbmwave::cli
