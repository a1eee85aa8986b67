#include "bbmwave/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace bbmwave::cli {

ConfigError::ConfigError(std::size_t line, const std::string& message)
    : std::runtime_error(line ? "config line " + std::to_string(line) + ": " + message : "config: " + message),
      line_(line) {}

const char* to_string(ScenarioName s) {
  switch (s) {
    case ScenarioName::mediterranean:
      return "mediterranean";
    case ScenarioName::cyprus:
      return "cyprus";
    case ScenarioName::standing_wave:
      return "standing_wave";
    default:
      return "rest";
  }
}

std::size_t RunConfig::mesh_sources() const {
  return static_cast<std::size_t>(mesh_path.has_value()) + pgm_path.has_value() + xyz_path.has_value() +
         rectangle.has_value();
}

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& s, std::string_view separators) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto next = s.find_first_of(separators, pos);
    const auto token = trim(std::string_view(s).substr(pos, next == std::string::npos ? std::string::npos : next - pos));
    if (!token.empty()) out.push_back(token);
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

double to_double(const std::string& v, std::size_t line, const std::string& key) {
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(x))
    throw ConfigError(line, key + ": expected a number, got '" + v + "'");
  return x;
}

long long to_integer(const std::string& v, std::size_t line, const std::string& key) {
  long long x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw ConfigError(line, key + ": expected an integer, got '" + v + "'");
  return x;
}

std::size_t to_count(const std::string& v, std::size_t line, const std::string& key) {
  const long long x = to_integer(v, line, key);
  if (x < 0) throw ConfigError(line, key + " must be nonnegative");
  return static_cast<std::size_t>(x);
}

bool to_bool(const std::string& v, std::size_t line, const std::string& key) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw ConfigError(line, key + ": expected true or false, got '" + v + "'");
}

LabelSet to_labels(const std::string& v, std::size_t line, const std::string& key) {
  if (v == "all") return LabelSet::every();
  if (v == "none") return LabelSet::of({});
  std::vector<int> labels;
  for (const auto& tok : split(v, " ,")) {
    const long long x = to_integer(tok, line, key);
    if (x < 1) throw ConfigError(line, key + ": boundary labels are positive integers");
    labels.push_back(static_cast<int>(x));
  }
  return LabelSet::of(std::move(labels));
}

double positive(double x, std::size_t line, const std::string& key) {
  if (!(x > 0.0)) throw ConfigError(line, key + " must be positive");
  return x;
}

using Setter = std::function<void(RunConfig&, const std::string&, std::size_t, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    // Paths are resolved by the caller; see parse_config.
    t["input.mesh"] = [](RunConfig& c, const std::string& v, std::size_t, const std::string&) { c.mesh_path = v; };
    t["input.pgm"] = [](RunConfig& c, const std::string& v, std::size_t, const std::string&) { c.pgm_path = v; };
    t["input.xyz"] = [](RunConfig& c, const std::string& v, std::size_t, const std::string&) { c.xyz_path = v; };
    t["input.rectangle"] = [](RunConfig& c, const std::string& v, std::size_t line, const std::string& key) {
      const auto tok = split(v, " ,");
      if (tok.size() != 6) throw ConfigError(line, key + ": expected 'x0 y0 x1 y1 nx ny'");
      RectangleSource r{{to_double(tok[0], line, key), to_double(tok[1], line, key)},
                        {to_double(tok[2], line, key), to_double(tok[3], line, key)},
                        to_count(tok[4], line, key),
                        to_count(tok[5], line, key)};
      if (!(r.hi.x > r.lo.x && r.hi.y > r.lo.y) || r.nx == 0 || r.ny == 0)
        throw ConfigError(line, key + ": empty rectangle");
      c.rectangle = r;
    };

    t["projection.mode"] = [](RunConfig& c, const std::string& v, std::size_t line, const std::string& key) {
      if (v == "uniform") {
        c.projection.mode = ProjectionMode::uniform_per_degree;
      } else if (v == "earth_radius") {
        c.projection.mode = ProjectionMode::earth_radius;
      } else {
        throw ConfigError(line, key + ": expected uniform or earth_radius");
      }
    };
    t["projection.R"] = [](RunConfig& c, const std::string& v, std::size_t line, const std::string& key) {
      c.projection.earth_radius_km = positive(to_double(v, line, key), line, key);
    };
    t["projection.ref_lat"] = [](RunConfig& c, const std::string& v, std::size_t line, const std::string& key) {
      const double lat = to_double(v, line, key);
      if (std::abs(lat) >= 90.0) throw ConfigError(line, key + " must lie in (-90, 90)");
      c.projection.ref_lat_deg = lat;
    };
    t["projection.km_per_degree"] = [](RunConfig& c, const std::string& v, std::size_t line, const std::string& key) {
      c.projection.km_per_degree = positive(to_double(v, line, key), line, key);
    };

    t["bathymetry.xyz"] = [](RunConfig& c, const std::string& v, std::size_t, const std::string&) { c.bathymetry_xyz = v; };
    t["bathymetry.flat"] = [](RunConfig& c, const std::string& v, std::size_t line, const std::string& key) {
      c.flat_depth = positive(to_double(v, line, key), line, key);
    };
    t["bathymetry.clamp"] = [](RunConfig& c, const std::string& v, std::size_t line, const std::string& key) {
      const double z = to_double(v, line, key);
      if (!(z < 0.0)) throw ConfigError(line, key + " must be negative (elevation cap in km)");
      c.depth_cap_km = z;
    };

    t["meshgen.max_area"] = [](RunConfig& c, const std::string& v, std::size_t line, const std::string& key) {
      c.meshgen.max_area = positive(to_double(v, line, key), line, key);
      c.max_area_set = true;
    };
    t["meshgen.min_angle"] = [](RunConfig& c, const std::string& v, std::size_t line, const std::string& key) {
      const double a = to_double(v, line, key);
      if (!(a >= 0.0 && a < 28.6)) throw ConfigError(line, key + " must lie in [0, 28.6)");
      c.meshgen.min_angle_deg = a;
    };
    t["meshgen.smooth_iters"] = [](RunConfig& c, const std::string& v, std::size_t line, const std::string& key) {
      c.meshgen.smooth_iters = to_count(v, line, key);
    };
    t["meshgen.smooth_lambda"] = [](RunConfig& c, const std::string& v, std::size_t line, const std::string& key) {
      const double l = to_double(v, line, key);
      if (!(l > 0.0 && l < 1.0)) throw ConfigError(line, key + " must lie in (0, 1)");
      c.meshgen.smooth_lambda = l;
    };
    t["meshgen.simplify_eps"] = [](RunConfig& c, const std::string& v, std::size_t line, const std::string& key) {
      const double e = to_double(v, line, key);
      if (e < 0.0) throw ConfigError(line, key + " must be nonnegative");
      c.meshgen.simplify_eps = e;
    };
    t["meshgen.min_component_cells"] = [](RunConfig& c, const std::string& v, std::size_t line, const std::string& key) {
      const double x = to_double(v, line, key);
      if (x < 0.0) throw ConfigError(line, key + " must be nonnegative");
      c.meshgen.min_component_cells = x;
    };
    t["meshgen.max_elements"] = [](RunConfig& c, const std::string& v, std::size_t line, const std::string& key) {
      c.meshgen.max_elements = to_count(v, line, key);
      if (c.meshgen.max_elements == 0) throw ConfigError(line, key + " must be positive");
    };
    t["meshgen.wet_threshold"] = [](RunConfig& c, const std::string& v, std::size_t line, const std::string& key) {
      c.raster.wet_threshold = to_double(v, line, key);
    };
    t["meshgen.wet_is_dark"] = [](RunConfig& c, const std::string& v, std::size_t line, const std::string& key) {
      c.raster.wet_is_dark = to_bool(v, line, key);
    };
    t["meshgen.pixel_size"] = [](RunConfig& c, const std::string& v, std::size_t line, const std::string& key) {
      c.raster.pixel_size = positive(to_double(v, line, key), line, key);
    };
    t["meshgen.open_sea"] = [](RunConfig& c, const std::string& v, std::size_t line, const std::string& key) {
      if (v == "box") {
        c.open_sea = OpenSeaRule::box_is_open_sea;
      } else if (v == "none") {
        c.open_sea = OpenSeaRule::all_shoreline;
      } else {
        throw ConfigError(line, key + ": expected box or none");
      }
    };
    t["meshgen.output"] = [](RunConfig& c, const std::string& v, std::size_t, const std::string&) { c.meshgen_output = v; };

    t["model.b"] = [](RunConfig& c, const std::string& v, std::size_t line, const std::string& key) {
      c.model.b = positive(to_double(v, line, key), line, key);
    };
    t["model.d"] = [](RunConfig& c, const std::string& v, std::size_t line, const std::string& key) {
      c.model.d = positive(to_double(v, line, key), line, key);
    };

    t["scenario.name"] = [](RunConfig& c, const std::string& v, std::size_t line, const std::string& key) {
      if (v == "mediterranean") {
        c.scenario = ScenarioName::mediterranean;
      } else if (v == "cyprus") {
        c.scenario = ScenarioName::cyprus;
      } else if (v == "standing_wave") {
        c.scenario = ScenarioName::standing_wave;
      } else if (v == "rest") {
        c.scenario = ScenarioName::rest;
      } else {
        throw ConfigError(line, key + ": unknown scenario '" + v + "'");
      }
    };
    t["scenario.variant"] = [](RunConfig& c, const std::string& v, std::size_t line, const std::string&) {
      try {
        c.cyprus_variant = parse_cyprus_variant(v);
      } catch (const ScenarioError& e) {
        throw ConfigError(line, e.what());
      }
    };
    t["scenario.PX"] = [](RunConfig& c, const std::string& v, std::size_t line, const std::string& key) {
      c.px = to_double(v, line, key);
    };
    t["scenario.PY"] = [](RunConfig& c, const std::string& v, std::size_t line, const std::string& key) {
      c.py = to_double(v, line, key);
    };
    t["scenario.amplitude"] = [](RunConfig& c, const std::string& v, std::size_t line, const std::string& key) {
      c.amplitude = positive(to_double(v, line, key), line, key);
    };
    t["scenario.mode"] = [](RunConfig& c, const std::string& v, std::size_t line, const std::string& key) {
      const long long m = to_integer(v, line, key);
      if (m < 1) throw ConfigError(line, key + " must be at least 1");
      c.mode = static_cast<int>(m);
    };
    t["scenario.D0"] = [](RunConfig& c, const std::string& v, std::size_t line, const std::string& key) {
      c.depth0 = positive(to_double(v, line, key), line, key);
    };

    t["bc.eta"] = [](RunConfig& c, const std::string& v, std::size_t line, const std::string& key) {
      c.bc_eta = to_labels(v, line, key);
    };
    t["bc.u"] = [](RunConfig& c, const std::string& v, std::size_t line, const std::string& key) {
      c.bc_u = to_labels(v, line, key);
    };
    t["bc.v"] = [](RunConfig& c, const std::string& v, std::size_t line, const std::string& key) {
      c.bc_v = to_labels(v, line, key);
    };

    t["sim.dt"] = [](RunConfig& c, const std::string& v, std::size_t line, const std::string& key) {
      c.sim.dt = positive(to_double(v, line, key), line, key);
    };
    t["sim.t_end"] = [](RunConfig& c, const std::string& v, std::size_t line, const std::string& key) {
      c.t_end_set = true;
      if (v == "period") {
        c.t_end_is_period = true;
        return;
      }
      const double t_end = to_double(v, line, key);
      if (t_end < 0.0) throw ConfigError(line, key + " must be nonnegative");
      c.sim.t_end = t_end;
    };
    t["sim.solver_tol"] = [](RunConfig& c, const std::string& v, std::size_t line, const std::string& key) {
      c.sim.solver_tol = positive(to_double(v, line, key), line, key);
    };
    t["sim.solver_maxit"] = [](RunConfig& c, const std::string& v, std::size_t line, const std::string& key) {
      c.sim.solver_maxit = to_count(v, line, key);
    };
    t["sim.scheme"] = [](RunConfig& c, const std::string& v, std::size_t line, const std::string& key) {
      if (v == "heun") {
        c.sim.scheme = Scheme::heun;
      } else if (v == "midpoint") {
        c.sim.scheme = Scheme::midpoint;
      } else {
        throw ConfigError(line, key + ": expected heun or midpoint");
      }
    };
    t["sim.gauges"] = [](RunConfig& c, const std::string& v, std::size_t line, const std::string& key) {
      c.sim.gauges.clear();
      for (const auto& item : split(v, ";")) {
        const auto xy = split(item, " ,");
        if (xy.size() != 2) throw ConfigError(line, key + ": expected 'x y; x y; ...'");
        c.sim.gauges.push_back({to_double(xy[0], line, key), to_double(xy[1], line, key)});
      }
    };

    t["output.dir"] = [](RunConfig& c, const std::string& v, std::size_t, const std::string&) { c.output_dir = v; };
    t["output.every"] = [](RunConfig& c, const std::string& v, std::size_t line, const std::string& key) {
      c.sim.output_every = to_count(v, line, key);
      if (c.sim.output_every == 0) throw ConfigError(line, key + " must be at least 1");
    };
    return t;
  }();
  return table;
}

bool is_mesh_source(const std::string& key) {
  return key == "input.mesh" || key == "input.pgm" || key == "input.xyz" || key == "input.rectangle";
}

}  // namespace

RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  RunConfig config;
  std::map<std::string, std::size_t> seen;
  std::string first_source;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    std::string_view raw = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(line_no, "expected 'section.key = value'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw ConfigError(line_no, "missing key");
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError(line_no, "unknown key '" + key + "'");
    if (value.empty()) throw ConfigError(line_no, key + ": missing value");
    if (const auto prev = seen.find(key); prev != seen.end())
      throw ConfigError(line_no, "duplicate key '" + key + "' (first set on line " + std::to_string(prev->second) + ")");
    if (is_mesh_source(key)) {
      if (!first_source.empty())
        throw ConfigError(line_no, "two mesh sources: " + key + " conflicts with " + first_source + " (line " +
                                       std::to_string(seen.at(first_source)) + ")");
      first_source = key;
    }
    seen.emplace(key, line_no);
    it->second(config, value, line_no, key);
    config.entries.emplace_back(key, value);
  }

  auto resolve = [&](std::optional<std::filesystem::path>& p) {
    if (p && p->is_relative() && !base_dir.empty()) p = base_dir / *p;
  };
  resolve(config.mesh_path);
  resolve(config.pgm_path);
  resolve(config.xyz_path);
  resolve(config.bathymetry_xyz);
  resolve(config.meshgen_output);
  if (config.output_dir.is_relative() && !base_dir.empty()) config.output_dir = base_dir / config.output_dir;

  if (config.t_end_is_period && config.scenario != ScenarioName::standing_wave)
    throw ConfigError(seen.at("sim.t_end"), "sim.t_end = period is only defined for scenario.name = standing_wave");
  if (config.flat_depth && config.bathymetry_xyz)
    throw ConfigError(seen.at("bathymetry.flat"), "bathymetry.flat conflicts with bathymetry.xyz");
  return config;
}

RunConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(0, "cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.parent_path());
}

namespace {

void require_file(const std::optional<std::filesystem::path>& p, const char* key) {
  if (p && !std::filesystem::is_regular_file(*p))
    throw ConfigError(0, std::string(key) + ": file not found: " + p->string());
}

void require_files(const RunConfig& c) {
  require_file(c.mesh_path, "input.mesh");
  require_file(c.pgm_path, "input.pgm");
  require_file(c.xyz_path, "input.xyz");
  require_file(c.bathymetry_xyz, "bathymetry.xyz");
}

}  // namespace

void require_for_meshgen(const RunConfig& c) {
  if (!c.pgm_path && !c.xyz_path) throw ConfigError(0, "meshgen needs input.pgm or input.xyz");
  if (!c.max_area_set) throw ConfigError(0, "missing required key meshgen.max_area");
  require_files(c);
}

void require_for_run(const RunConfig& c) {
  if (c.mesh_sources() == 0)
    throw ConfigError(0, "missing mesh source (one of input.mesh, input.pgm, input.xyz, input.rectangle)");
  if (!c.scenario) throw ConfigError(0, "missing required key scenario.name");
  if (!c.t_end_set) throw ConfigError(0, "missing required key sim.t_end");
  if ((c.pgm_path || c.xyz_path) && !c.max_area_set)
    throw ConfigError(0, "missing required key meshgen.max_area (needed to mesh the input)");
  if (*c.scenario == ScenarioName::cyprus && !c.bathymetry_xyz && !c.xyz_path && !c.flat_depth)
    throw ConfigError(0, "scenario cyprus needs a bathymetry grid (input.xyz or bathymetry.xyz) or bathymetry.flat");
  require_files(c);
}

}  // namespace bbmwave::cli
