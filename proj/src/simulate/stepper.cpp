#include <cmath>
#include <string>
#include <thread>

#include "bbmwave/simulate.hpp"

namespace bbmwave {

BlowUpError::BlowUpError(std::size_t step, double t)
    : SimulationError("non-finite values at step " + std::to_string(step) + " (t = " + std::to_string(t) +
                      "); the time step is probably too large"),
      step_(step) {}

RateSolver::RateSolver(const P1Space& space, const BathymetryField& depth, const SystemMatrices& matrices,
                       const DirichletSpec& dirichlet, SolverOptions options)
    : space_(space), depth_(depth), matrices_(matrices), dirichlet_(dirichlet), options_(options) {
  const std::size_t n = space.dofs();
  if (matrices.mass.rows() != n || matrices.a_eta.rows() != n || matrices.a_u.rows() != n || matrices.a_v.rows() != n)
    throw SimulationError("system matrices do not match the mesh");
}

Vector RateSolver::solve(const SparseMatrix& a, Vector rhs, const Vector& guess, bool symmetric, const char* what) {
  SolveResult r = symmetric ? cg_solve(a, rhs, options_, guess) : bicgstab_solve(a, rhs, options_, guess);
  if (!r.converged())
    throw SolverFailure(std::string(what) + " solve failed (" + to_string(r.status) + ", relative residual " +
                        std::to_string(r.residual) + " after " + std::to_string(r.iterations) + " iterations)");
  stats_.solves += 1;
  stats_.iterations += r.iterations;
  stats_.max_residual = std::max(stats_.max_residual, r.residual);
  return std::move(r.x);
}

Rates RateSolver::operator()(const State& state, const Rates* guess) {
  if (!guess && last_) guess = &*last_;
  const Vector none;
  const Vector& g_eta = guess ? guess->eta : none;
  const Vector& g_u = guess ? guess->u : none;
  const Vector& g_v = guess ? guess->v : none;

  Vector fe = apply_dirichlet_rhs(dirichlet_, eta_rhs(space_, depth_, state), Field::eta);
  Vector fu = apply_dirichlet_rhs(dirichlet_, velocity_rhs(space_, state, Component::x), Field::u);
  Vector fv = apply_dirichlet_rhs(dirichlet_, velocity_rhs(space_, state, Component::y), Field::v);
  // Overflow inside a stage shows up here before it reaches the state.
  for (const Vector* f : {&fe, &fu, &fv})
    if (!std::isfinite(norm2(*f))) throw BlowUpError(steps_ + 1, state.t);

  Rates out;
  out.eta = solve(matrices_.a_eta, std::move(fe), g_eta, true, "eta");
  out.u = solve(matrices_.a_u, std::move(fu), g_u, false, "u");
  out.v = solve(matrices_.a_v, std::move(fv), g_v, false, "v");

  // Constrained rates are zero by construction; make it exact.
  for (auto i : dirichlet_.eta_nodes) out.eta[i] = 0.0;
  for (auto i : dirichlet_.u_nodes) out.u[i] = 0.0;
  for (auto i : dirichlet_.v_nodes) out.v[i] = 0.0;
  last_ = out;
  return out;
}

Rates compute_rates(const P1Space& space, const BathymetryField& depth, const SystemMatrices& matrices,
                    const DirichletSpec& dirichlet, const State& state, const SolverOptions& options) {
  RateSolver solver(space, depth, matrices, dirichlet, options);
  return solver(state);
}

namespace {

// y + h * k, fieldwise.
State advance(const State& y, const Rates& k, double h) {
  State out = y;
  for (std::size_t i = 0; i < y.size(); ++i) {
    out.eta[i] += h * k.eta[i];
    out.u[i] += h * k.u[i];
    out.v[i] += h * k.v[i];
  }
  return out;
}

// a + (b - c), fieldwise.
Rates shifted(const Rates& a, const Rates& b, const Rates& c) {
  Rates out = a;
  for (std::size_t i = 0; i < a.eta.size(); ++i) {
    out.eta[i] += b.eta[i] - c.eta[i];
    out.u[i] += b.u[i] - c.u[i];
    out.v[i] += b.v[i] - c.v[i];
  }
  return out;
}

}  // namespace

State RateSolver::step(const State& state, double dt, Scheme scheme) {
  if (!(dt >= 0.0) || !std::isfinite(dt)) throw SimulationError("time step must be finite and nonnegative");
  std::optional<Rates> guess;
  if (history_.size() == 2) guess = shifted(history_[0].second, history_[0].first, history_[1].second);
  const Rates k1 = (*this)(state, guess ? &*guess : nullptr);

  guess.reset();
  if (!history_.empty()) guess = shifted(k1, history_[0].second, history_[0].first);
  State next;
  Rates k2;
  if (scheme == Scheme::heun) {
    k2 = (*this)(advance(state, k1, dt), guess ? &*guess : &k1);
    next = state;
    for (std::size_t i = 0; i < state.size(); ++i) {
      next.eta[i] += 0.5 * dt * (k1.eta[i] + k2.eta[i]);
      next.u[i] += 0.5 * dt * (k1.u[i] + k2.u[i]);
      next.v[i] += 0.5 * dt * (k1.v[i] + k2.v[i]);
    }
  } else {
    k2 = (*this)(advance(state, k1, 0.5 * dt), guess ? &*guess : &k1);
    next = advance(state, k2, dt);
  }
  next.t = state.t + dt;
  ++steps_;
  history_.insert(history_.begin(), {k1, std::move(k2)});
  if (history_.size() > 2) history_.pop_back();
  return next;
}

State rk2_step(RateSolver& rates, const State& state, double dt, Scheme scheme) {
  return rates.step(state, dt, scheme);
}

State rk2_step(const P1Space& space, const BathymetryField& depth, const SystemMatrices& matrices,
               const DirichletSpec& dirichlet, const State& state, double dt, Scheme scheme) {
  RateSolver rates(space, depth, matrices, dirichlet);
  return rk2_step(rates, state, dt, scheme);
}

}  // namespace bbmwave
