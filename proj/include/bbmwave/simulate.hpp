#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bbmwave/fem.hpp"

namespace bbmwave {

class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A stage solve did not reach its tolerance.
class SolverFailure : public SimulationError {
 public:
  using SimulationError::SimulationError;
};

/// Non-finite values after a step, usually dt too large.
class BlowUpError : public SimulationError {
 public:
  BlowUpError(std::size_t step, double t);
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

enum class Scheme { heun, midpoint };

struct SimConfig {
  double dt = 0.1;
  double t_end = 0.0;  // simulated duration, measured from the initial state's t
  double solver_tol = 1e-10;
  std::size_t solver_maxit = 0;  // 0 means 10 * n
  std::size_t output_every = 1;  // snapshot cadence in steps; the final step is always emitted
  std::vector<Point2> gauges;
  Scheme scheme = Scheme::heun;

  void validate() const;
  /// Steps needed to reach t_end; the last one is shortened if dt does not divide it.
  std::size_t step_count() const;
};

struct Rates {
  Vector eta;
  Vector u;
  Vector v;
};

struct SolverStats {
  std::size_t solves = 0;
  std::size_t iterations = 0;
  double max_residual = 0.0;
};

/// Solves the three rate systems of the semi-discrete equations. Solves are
/// warm-started from the previous step's rates, extrapolated in time.
class RateSolver {
 public:
  RateSolver(const P1Space& space, const BathymetryField& depth, const SystemMatrices& matrices,
             const DirichletSpec& dirichlet, SolverOptions options = {});

  /// Rates at one state; guess defaults to the last rates computed.
  Rates operator()(const State& state, const Rates* guess = nullptr);
  /// One explicit two-stage Runge-Kutta step.
  State step(const State& state, double dt, Scheme scheme);
  const SolverStats& stats() const { return stats_; }

 private:
  Vector solve(const SparseMatrix& a, Vector rhs, const Vector& guess, bool symmetric, const char* what);

  const P1Space& space_;
  const BathymetryField& depth_;
  const SystemMatrices& matrices_;
  const DirichletSpec& dirichlet_;
  SolverOptions options_;
  std::optional<Rates> last_;
  // Stage rates of the last two steps, newest first.
  std::vector<std::pair<Rates, Rates>> history_;
  std::size_t steps_ = 0;
  SolverStats stats_;
};

Rates compute_rates(const P1Space& space, const BathymetryField& depth, const SystemMatrices& matrices,
                    const DirichletSpec& dirichlet, const State& state, const SolverOptions& options = {});

/// One explicit two-stage Runge-Kutta step (Heun by default).
State rk2_step(RateSolver& rates, const State& state, double dt, Scheme scheme = Scheme::heun);
State rk2_step(const P1Space& space, const BathymetryField& depth, const SystemMatrices& matrices,
               const DirichletSpec& dirichlet, const State& state, double dt, Scheme scheme = Scheme::heun);

/// 1^T M eta, the integral of the P1 elevation.
double discrete_mass(const SparseMatrix& mass, std::span<const double> eta);

struct GaugeSample {
  double t = 0.0;
  double eta = 0.0;
  double u = 0.0;
  double v = 0.0;
};

/// Gauge points located once; points outside the mesh are skipped.
class GaugeSet {
 public:
  GaugeSet(const Mesh& mesh, std::vector<Point2> points);

  const std::vector<Point2>& points() const { return points_; }
  bool located(std::size_t g) const { return locations_[g].has_value(); }
  std::vector<std::size_t> skipped() const;
  /// One sample per gauge; skipped gauges yield nullopt.
  std::vector<std::optional<GaugeSample>> sample(const State& state) const;

 private:
  const Mesh* mesh_;
  std::vector<Point2> points_;
  std::vector<std::optional<Location>> locations_;
};

std::vector<std::optional<GaugeSample>> probe_gauges(const Mesh& mesh, const State& state,
                                                     std::span<const Point2> points);

struct Diagnostics {
  std::vector<std::pair<double, double>> mass;  // (t, integral of eta)
  Vector eta_max;
  std::vector<std::vector<GaugeSample>> gauges;  // per gauge point; empty for skipped gauges
  std::vector<std::size_t> skipped_gauges;
  std::size_t steps = 0;
  SolverStats solver;
};

/// Receives (step, t, fields, running max) from the time loop.
class SnapshotSink {
 public:
  virtual ~SnapshotSink() = default;
  virtual void snapshot(std::size_t step, double t, const Mesh& mesh, const State& state, const Vector& eta_max) = 0;
};

struct RunResult {
  State final;
  Diagnostics diagnostics;
};

/// Failure inside run(); carries everything recorded up to the failing step.
class RunError : public SimulationError {
 public:
  RunError(const std::string& what, State last, Diagnostics partial)
      : SimulationError(what), last_(std::move(last)), partial_(std::move(partial)) {}
  const State& last_state() const { return last_; }
  const Diagnostics& partial() const { return partial_; }

 private:
  State last_;
  Diagnostics partial_;
};

RunResult run(const P1Space& space, const BathymetryField& depth, const SystemMatrices& matrices,
              const DirichletSpec& dirichlet, const State& initial, const SimConfig& config,
              std::span<SnapshotSink* const> sinks = {});
RunResult run(const P1Space& space, const BathymetryField& depth, const ModelParams& params,
              const DirichletSpec& dirichlet, const State& initial, const SimConfig& config,
              std::span<SnapshotSink* const> sinks = {});

}  // namespace bbmwave
