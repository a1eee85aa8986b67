#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "bbmwave/cli/config.hpp"

namespace bbmwave::cli {

struct MeshOutcome {
  Mesh mesh;
  std::optional<MeshgenReport> report;  // set when the mesh was generated
};

/// Loads or generates the mesh named by the config's mesh source.
MeshOutcome load_mesh(const RunConfig& config);

/// Runs the mesh generation pipeline, writes the mesh file and prints a report.
MeshOutcome cmd_meshgen(const RunConfig& config, std::ostream& log);

struct RunOutcome {
  std::size_t steps = 0;
  double t_final = 0.0;
  std::vector<std::filesystem::path> snapshots;
  std::optional<double> standing_wave_error;  // relative L2 error of eta at t_final
};

/// Simulates the configured scenario and writes snapshots, series, the running
/// maximum and a manifest into the output directory. Partial outputs are kept
/// when the run fails.
RunOutcome cmd_run(const RunConfig& config, std::ostream& log);

/// Re-samples the configured gauges from a saved snapshot; CSV on out.
void cmd_probe(const RunConfig& config, std::size_t snapshot, std::ostream& out, std::ostream& log);

std::filesystem::path snapshot_path(const std::filesystem::path& dir, std::size_t step);

}  // namespace bbmwave::cli
