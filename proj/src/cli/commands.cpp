#include "bbmwave/cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "bbmwave/cli/io.hpp"

namespace bbmwave::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "1.0.0";

// Stage attribution for pipeline errors.
template <class F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string(name) + ": " + e.what());
  }
}

PlanarGrid load_grid(const fs::path& path, const ProjectionSpec& projection) {
  return project(parse_xyz_file(path.string()), projection);
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

std::map<int, std::size_t> label_census(const Mesh& mesh) {
  std::map<int, std::size_t> census;
  for (const auto& e : mesh.boundary_edges) ++census[e.label];
  return census;
}

json mesh_stats(const Mesh& mesh) {
  json j;
  j["vertices"] = mesh.vertices.size();
  j["triangles"] = mesh.triangles.size();
  j["boundary_edges"] = mesh.boundary_edges.size();
  j["area"] = total_area(mesh);
  j["min_angle_deg"] = mesh.triangles.empty() ? 0.0 : mesh_min_angle(mesh);
  json census = json::object();
  for (const auto& [label, n] : label_census(mesh)) census[std::to_string(label)] = n;
  j["boundary_labels"] = census;
  return j;
}

std::string compiler_version() {
#if defined(__clang__)
  return std::string("clang ") + __clang_version__;
#elif defined(__GNUC__)
  return std::string("gcc ") + __VERSION__;
#else
  return "unknown";
#endif
}

class VtkSnapshotSink : public SnapshotSink {
 public:
  VtkSnapshotSink(fs::path dir, const Vector& depth) : dir_(std::move(dir)), depth_(depth) {}

  void snapshot(std::size_t step, double t, const Mesh& mesh, const State& state, const Vector&) override {
    const auto path = snapshot_path(dir_, step);
    write_vtk_file(path, mesh, {{"eta", &state.eta}, {"depth", &depth_}}, {{"velocity", &state.u, &state.v}},
                   "bbmwave snapshot step=" + std::to_string(step) + " t=" + format_double(t));
    written.push_back(path);
  }

  std::vector<fs::path> written;

 private:
  fs::path dir_;
  const Vector& depth_;
};

struct Prepared {
  ScenarioSpec scenario;
  std::optional<StandingWave> wave;
  BathymetryField depth;
  std::string depth_source;
  DirichletSpec dirichlet;
};

Prepared prepare(const RunConfig& config, const Mesh& mesh) {
  Prepared p;
  switch (*config.scenario) {
    case ScenarioName::mediterranean:
      p.scenario = mediterranean_scenario(config.px, config.py);
      break;
    case ScenarioName::cyprus:
      p.scenario = cyprus_scenario(config.cyprus_variant);
      break;
    case ScenarioName::standing_wave: {
      const auto box = bounding_box(mesh);
      const double tol = tolerances(mesh).geometric;
      if (std::abs(box.lo.x) > tol || std::abs(box.lo.y) > tol)
        throw ScenarioError("standing_wave needs a mesh of [0, L] x [0, W]");
      StandingWave w;
      w.amplitude = config.amplitude;
      w.mode = config.mode;
      w.length = box.hi.x;
      w.width = box.hi.y;
      w.params = config.model;
      w.depth0 = config.depth0;
      p.wave = w;
      p.scenario = w.scenario();
      break;
    }
    case ScenarioName::rest:
      p.scenario = rest_scenario({LabelSet::every(), LabelSet::every(), LabelSet::every()}, 1.0);
      break;
  }
  p.scenario.params = config.model;

  std::optional<fs::path> grid_path = config.bathymetry_xyz;
  if (!grid_path && config.xyz_path) grid_path = config.xyz_path;
  if (grid_path) {
    const auto grid = stage("bathymetry", [&] { return clamp_depth(load_grid(*grid_path, config.projection), config.depth_cap_km); });
    p.depth = stage("bathymetry", [&] { return bind_to_mesh(grid, mesh); });
    p.depth_source = grid_path->string();
  } else {
    const auto flat = config.flat_depth ? config.flat_depth : p.scenario.flat_depth;
    if (!flat) throw ScenarioError(p.scenario.name + " needs bathymetry: set bathymetry.xyz or bathymetry.flat");
    p.depth = stage("bathymetry", [&] { return flat_bathymetry(mesh, *flat); });
    p.depth_source = "flat " + format_double(*flat);
  }

  p.dirichlet = p.scenario.dirichlet(mesh);
  if (config.bc_eta) p.dirichlet.eta_nodes = config.bc_eta->nodes(mesh);
  if (config.bc_u) p.dirichlet.u_nodes = config.bc_u->nodes(mesh);
  if (config.bc_v) p.dirichlet.v_nodes = config.bc_v->nodes(mesh);
  return p;
}

void write_manifest(const fs::path& path, const json& manifest) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << manifest.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace

fs::path snapshot_path(const fs::path& dir, std::size_t step) {
  char name[64];
  std::snprintf(name, sizeof name, "snapshot_%04zu.vtk", step);
  return dir / name;
}

MeshOutcome load_mesh(const RunConfig& config) {
  MeshOutcome out;
  if (config.mesh_path) {
    out.mesh = stage("mesh", [&] { return read_msh_file(config.mesh_path->string()); });
  } else if (config.rectangle) {
    const auto& r = *config.rectangle;
    out.mesh = stage("mesh", [&] { return rectangle_mesh(r.lo, r.hi, r.nx, r.ny); });
  } else if (config.pgm_path || config.xyz_path) {
    LevelGrid level;
    if (config.pgm_path) {
      level = stage("pgm", [&] { return raster_to_level(read_pgm_file(config.pgm_path->string()), config.raster); });
    } else {
      // The level set comes from the unclamped grid so that the coastline sits at z = 0.
      level = stage("xyz", [&] { return bathy_to_level(load_grid(*config.xyz_path, config.projection)); });
    }
    MeshgenReport report;
    out.mesh = stage("meshgen", [&] { return generate_mesh(level, config.meshgen, config.open_sea, &report); });
    out.report = report;
  } else {
    throw ConfigError(0, "no mesh source configured");
  }
  return out;
}

MeshOutcome cmd_meshgen(const RunConfig& config, std::ostream& log) {
  require_for_meshgen(config);
  auto outcome = load_mesh(config);
  const fs::path path = config.meshgen_output ? *config.meshgen_output : config.output_dir / "mesh.msh";
  if (path.has_parent_path()) ensure_dir(path.parent_path());
  write_msh_file(path.string(), outcome.mesh);

  const auto& m = outcome.mesh;
  log << "vertices " << m.vertices.size() << '\n';
  log << "triangles " << m.triangles.size() << '\n';
  log << "min_angle_deg " << format_double(mesh_min_angle(m)) << '\n';
  log << "wet_area " << format_double(total_area(m)) << '\n';
  for (const auto& [label, n] : label_census(m)) log << "label " << label << " edges " << n << '\n';
  if (outcome.report) {
    log << "contours " << outcome.report->contours << '\n';
    log << "pslg_points " << outcome.report->pslg_points << '\n';
  }
  log << "wrote " << path.string() << '\n';
  return outcome;
}

RunOutcome cmd_run(const RunConfig& config, std::ostream& log) {
  require_for_run(config);
  const auto start = std::chrono::steady_clock::now();
  const auto mesh_outcome = load_mesh(config);
  const Mesh& mesh = mesh_outcome.mesh;
  const auto prepared = prepare(config, mesh);

  SimConfig sim = config.sim;
  if (config.t_end_is_period) sim.t_end = prepared.wave->period();
  InitialStateReport clamp;
  const State initial = initial_state(mesh, prepared.scenario.initial, prepared.dirichlet, &clamp);
  if (clamp.clamped_nodes > 0)
    log << "warning: initial data set to 0 on " << clamp.clamped_nodes << " constrained nodes (max |value| "
        << format_double(clamp.max_clamp) << ")\n";

  const fs::path& dir = config.output_dir;
  ensure_dir(dir);
  write_msh_file((dir / "mesh.msh").string(), mesh);

  const P1Space space(mesh);
  const Vector depth(prepared.depth.depth.begin(), prepared.depth.depth.end());
  VtkSnapshotSink sink(dir, depth);
  SnapshotSink* sinks[] = {&sink};

  json manifest;
  manifest["tool"] = "bbmwave";
  manifest["version"] = kVersion;
  manifest["command"] = "run";
  json echo = json::array();
  for (const auto& [k, v] : config.entries) echo.push_back({{"key", k}, {"value", v}});
  manifest["config"] = echo;
  manifest["scenario"] = prepared.scenario.name;
  manifest["depth"] = prepared.depth_source;
  manifest["mesh"] = mesh_stats(mesh);
  manifest["dt"] = sim.dt;
  manifest["t_end"] = sim.t_end;
  manifest["fields"] = {{"snapshot", {"eta", "depth", "velocity"}}, {"eta_max", {"eta_max", "depth"}}};
  manifest["initial_clamp"] = {{"nodes", clamp.clamped_nodes}, {"max_abs", clamp.max_clamp}};

  auto finish = [&](const Diagnostics& diag, const State& last, const std::string& status, const std::string& error) {
    write_vtk_file(dir / "eta_max.vtk", mesh, {{"eta_max", &diag.eta_max}, {"depth", &depth}}, {},
                   "bbmwave eta_max t=" + format_double(last.t));
    write_mass_csv(dir / "mass.csv", diag.mass);
    write_gauges_csv(dir / "gauges.csv", sim.gauges, diag.gauges);
    manifest["status"] = status;
    if (!error.empty()) manifest["error"] = error;
    manifest["steps"] = diag.steps;
    manifest["t_final"] = last.t;
    manifest["skipped_gauges"] = diag.skipped_gauges;
    manifest["solver"] = {{"solves", diag.solver.solves},
                          {"iterations", diag.solver.iterations},
                          {"max_residual", diag.solver.max_residual}};
    json outputs = json::array({"mesh.msh", "eta_max.vtk", "mass.csv", "gauges.csv"});
    for (const auto& p : sink.written) outputs.push_back(p.filename().string());
    manifest["outputs"] = outputs;
    manifest["versions"] = {{"bbmwave", kVersion},
                            {"compiler", compiler_version()},
                            {"cxx_standard", __cplusplus},
                            {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                                  std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                                  std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
    manifest["threads"] = worker_count();
    manifest["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(dir / "manifest.json", manifest);
  };

  for (auto g : GaugeSet(mesh, sim.gauges).skipped())
    log << "warning: gauge " << g << " lies outside the mesh and is skipped\n";

  RunResult result;
  try {
    result = run(space, prepared.depth, prepared.scenario.params, prepared.dirichlet, initial, sim, sinks);
  } catch (const RunError& e) {
    finish(e.partial(), e.last_state(), "failed", e.what());
    throw;
  }
  finish(result.diagnostics, result.final, "ok", "");

  RunOutcome outcome;
  outcome.steps = result.diagnostics.steps;
  outcome.t_final = result.final.t;
  outcome.snapshots = sink.written;
  log << "steps " << outcome.steps << '\n';
  log << "t_final " << format_double(outcome.t_final) << '\n';
  log << "snapshots " << outcome.snapshots.size() << '\n';
  if (prepared.wave) {
    outcome.standing_wave_error = prepared.wave->relative_eta_error(mesh, result.final);
    log << "final relative L2 error of eta " << format_double(*outcome.standing_wave_error) << '\n';
  }
  log << "wrote " << dir.string() << '\n';
  return outcome;
}

void cmd_probe(const RunConfig& config, std::size_t snapshot, std::ostream& out, std::ostream& log) {
  const auto path = snapshot_path(config.output_dir, snapshot);
  if (!fs::exists(path)) throw IoError("file not found: " + path.string());
  const auto data = read_vtk_file(path);
  double t = 0.0;
  const auto at = data.title.find(" t=");
  if (at == std::string::npos) throw IoError(path.string() + ": title carries no time");
  {
    std::istringstream in(data.title.substr(at + 3));
    if (!(in >> t)) throw IoError(path.string() + ": cannot read the time from the title");
  }
  const auto eta = data.scalars.find("eta");
  const auto vel = data.vectors.find("velocity");
  if (eta == data.scalars.end() || vel == data.vectors.end())
    throw IoError(path.string() + ": snapshot lacks eta or velocity");
  State state{t, eta->second, vel->second.first, vel->second.second};

  const auto samples = probe_gauges(data.mesh, state, config.sim.gauges);
  std::vector<std::vector<std::string>> rows;
  for (std::size_t g = 0; g < samples.size(); ++g) {
    if (!samples[g]) {
      log << "warning: gauge " << g << " lies outside the mesh and is skipped\n";
      continue;
    }
    const auto& s = *samples[g];
    const auto& p = config.sim.gauges[g];
    rows.push_back({format_double(t), std::to_string(g), format_double(p.x), format_double(p.y), format_double(s.eta),
                    format_double(s.u), format_double(s.v)});
  }
  write_csv(out, {"t", "gauge", "x", "y", "eta", "u", "v"}, rows);
}

}  // namespace bbmwave::cli
