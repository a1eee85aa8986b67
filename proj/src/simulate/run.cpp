#include <algorithm>
#include <cmath>
#include <string>

#include "bbmwave/simulate.hpp"

namespace bbmwave {

void SimConfig::validate() const {
  if (!(std::isfinite(dt) && dt > 0.0)) throw SimulationError("sim.dt must be positive");
  if (!(std::isfinite(t_end) && t_end >= 0.0)) throw SimulationError("sim.t_end must be nonnegative");
  if (!(std::isfinite(solver_tol) && solver_tol > 0.0)) throw SimulationError("sim.solver_tol must be positive");
  if (output_every == 0) throw SimulationError("output.every must be at least 1");
  for (const auto& g : gauges)
    if (!is_finite(g)) throw SimulationError("gauge coordinates must be finite");
}

std::size_t SimConfig::step_count() const {
  const double ratio = t_end / dt;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, nearest)) return static_cast<std::size_t>(nearest);
  return static_cast<std::size_t>(std::ceil(ratio));
}

namespace {

void check_initial(const State& s, const DirichletSpec& dirichlet) {
  for (Field f : {Field::eta, Field::u, Field::v}) {
    const Vector& x = f == Field::eta ? s.eta : (f == Field::u ? s.u : s.v);
    for (auto i : dirichlet.nodes(f))
      if (x[i] != 0.0)
        throw SimulationError("initial data do not vanish at constrained node " + std::to_string(i));
  }
  if (!s.all_finite()) throw SimulationError("initial data contain non-finite values");
}

}  // namespace

RunResult run(const P1Space& space, const BathymetryField& depth, const SystemMatrices& matrices,
              const DirichletSpec& dirichlet, const State& initial, const SimConfig& config,
              std::span<SnapshotSink* const> sinks) {
  config.validate();
  if (initial.size() != space.dofs() || initial.u.size() != space.dofs() || initial.v.size() != space.dofs())
    throw SimulationError("initial state does not match the mesh");
  check_initial(initial, dirichlet);

  SolverOptions options;
  options.tolerance = config.solver_tol;
  options.max_iterations = config.solver_maxit;
  RateSolver rates(space, depth, matrices, dirichlet, options);
  const GaugeSet gauges(space.mesh(), config.gauges);

  Diagnostics diag;
  diag.eta_max = initial.eta;
  diag.gauges.resize(config.gauges.size());
  diag.skipped_gauges = gauges.skipped();

  auto record = [&](const State& s) {
    diag.mass.emplace_back(s.t, discrete_mass(matrices.mass, s.eta));
    const auto samples = gauges.sample(s);
    for (std::size_t g = 0; g < samples.size(); ++g)
      if (samples[g]) diag.gauges[g].push_back(*samples[g]);
  };
  auto emit = [&](std::size_t step, const State& s) {
    for (auto* sink : sinks) sink->snapshot(step, s.t, space.mesh(), s, diag.eta_max);
  };

  State state = initial;
  record(state);
  emit(0, state);

  const std::size_t n = config.step_count();
  for (std::size_t k = 1; k <= n; ++k) {
    const double target = initial.t + (k == n ? config.t_end : static_cast<double>(k) * config.dt);
    State next;
    try {
      next = rk2_step(rates, state, target - state.t, config.scheme);
      next.t = target;
      if (!next.all_finite()) throw BlowUpError(k, target);
    } catch (const SimulationError& e) {
      diag.solver = rates.stats();
      throw RunError("step " + std::to_string(k) + ": " + e.what(), state, diag);
    } catch (const LinalgError& e) {
      diag.solver = rates.stats();
      throw RunError("step " + std::to_string(k) + ": " + e.what(), state, diag);
    }
    state = std::move(next);
    for (std::size_t i = 0; i < state.size(); ++i) diag.eta_max[i] = std::max(diag.eta_max[i], state.eta[i]);
    diag.steps = k;
    record(state);
    if (k % config.output_every == 0 || k == n) emit(k, state);
  }
  diag.solver = rates.stats();
  return {std::move(state), std::move(diag)};
}

RunResult run(const P1Space& space, const BathymetryField& depth, const ModelParams& params,
              const DirichletSpec& dirichlet, const State& initial, const SimConfig& config,
              std::span<SnapshotSink* const> sinks) {
  const SystemMatrices matrices = build_system_matrices(space, depth, params, dirichlet);
  return run(space, depth, matrices, dirichlet, initial, config, sinks);
}

}  // namespace bbmwave
