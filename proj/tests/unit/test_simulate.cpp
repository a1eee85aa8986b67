#include <cmath>
#include <numbers>

#include "doctest.h"
#include "gen.hpp"
#include "oracles.hpp"

#include "bbmwave/scenarios.hpp"
#include "bbmwave/simulate.hpp"

using namespace bbmwave;

namespace {

struct Setup {
  Mesh mesh;
  P1Space space;
  BathymetryField depth;
  DirichletSpec dirichlet;
  SystemMatrices matrices;

  Setup(Mesh m, BathymetryField d, DirichletSpec dir, ModelParams p = {})
      : mesh(std::move(m)), space(mesh), depth(std::move(d)), dirichlet(std::move(dir)),
        matrices(build_system_matrices(space, depth, p, dirichlet)) {}
};

Setup standing(std::size_t n) {
  StandingWave w;
  Mesh m = rectangle_mesh({0, 0}, {1, 1}, n, n);
  auto d = flat_bathymetry(m, 1.0);
  auto dir = w.dirichlet(m);
  return Setup(std::move(m), std::move(d), std::move(dir));
}

// Nodal exact standing wave at time t.
State exact_state(const Mesh& m, double t) {
  // omega from the linear dispersion relation with b = d = 1/6, D0 = 1.
  const double k = std::numbers::pi, w = k / (1.0 + k * k / 6.0), a = 1e-5;
  const double c = a * k / (w * (1.0 + k * k / 6.0));
  State s = State::zeros(m.vertices.size(), t);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double x = m.point(i).x;
    s.eta[i] = a * std::cos(w * t) * std::cos(k * x);
    s.u[i] = c * std::sin(w * t) * std::sin(k * x);
  }
  return s;
}

double state_distance(const State& a, const State& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += (a.eta[i] - b.eta[i]) * (a.eta[i] - b.eta[i]) + (a.u[i] - b.u[i]) * (a.u[i] - b.u[i]) +
         (a.v[i] - b.v[i]) * (a.v[i] - b.v[i]);
  return std::sqrt(s);
}

class Recorder : public SnapshotSink {
 public:
  void snapshot(std::size_t step, double t, const Mesh&, const State& s, const Vector& eta_max) override {
    steps.push_back(step);
    times.push_back(t);
    maxima.push_back(eta_max);
    etas.push_back(s.eta);
  }
  std::vector<std::size_t> steps;
  std::vector<double> times;
  std::vector<Vector> maxima;
  std::vector<Vector> etas;
};

}  // namespace

TEST_CASE("rest state has zero rates for any bathymetry") {
  testsupport::Gen g(1);
  Mesh m = g.jittered_rectangle(6, 6);
  std::vector<double> d;
  for (std::size_t i = 0; i < m.vertices.size(); ++i) d.push_back(g.uniform(0.2, 3.0));
  auto depth = make_bathymetry(m, d);
  Setup s(std::move(m), std::move(depth), {});
  const auto r = compute_rates(s.space, s.depth, s.matrices, s.dirichlet, State::zeros(s.mesh.vertices.size()));
  CHECK(testsupport::max_abs(r.eta) == 0.0);
  CHECK(testsupport::max_abs(r.u) == 0.0);
  CHECK(testsupport::max_abs(r.v) == 0.0);
}

TEST_CASE("constrained nodes have exactly zero rate") {
  Mesh m = rectangle_mesh({0, 0}, {1, 1}, 6, 6);
  auto depth = flat_bathymetry(m, 1.0);
  const auto dir = dirichlet_from_labels(m, std::vector<int>{1}, std::vector<int>{1}, std::vector<int>{1});
  Setup s(std::move(m), std::move(depth), dir);
  testsupport::Gen g(2);
  State st = State::zeros(s.mesh.vertices.size());
  st.eta = g.vector(st.size(), -0.01, 0.01);
  st.u = g.vector(st.size(), -0.01, 0.01);
  const auto r = compute_rates(s.space, s.depth, s.matrices, s.dirichlet, st);
  for (auto i : dir.eta_nodes) CHECK(r.eta[i] == 0.0);
  for (auto i : dir.u_nodes) CHECK(r.u[i] == 0.0);
  for (auto i : dir.v_nodes) CHECK(r.v[i] == 0.0);
  CHECK(testsupport::max_abs(r.eta) > 0.0);
}

TEST_CASE("standing-wave rates converge to the analytic time derivatives") {
  const double k = std::numbers::pi, w = k / (1.0 + k * k / 6.0), a = 1e-5;
  const double c = a * k / (w * (1.0 + k * k / 6.0));
  const double t = 0.7;
  double prev = 0.0;
  for (std::size_t n : {8, 16, 32}) {
    const Setup s = standing(n);
    const auto r = compute_rates(s.space, s.depth, s.matrices, s.dirichlet, exact_state(s.mesh, t));
    double err = 0.0;
    for (std::size_t i = 0; i < r.eta.size(); ++i) {
      const double x = s.mesh.point(i).x;
      err = std::max(err, std::abs(r.eta[i] + a * w * std::sin(w * t) * std::cos(k * x)));
      err = std::max(err, std::abs(r.u[i] - c * w * std::cos(w * t) * std::sin(k * x)));
    }
    CAPTURE(n);
    if (prev > 0.0) {
      CHECK(prev / err > 3.0);
      CHECK(prev / err < 5.5);
    }
    prev = err;
  }
  CHECK(prev < 3e-3 * a);
}

TEST_CASE("rk2_step: rest stays at rest and dt = 0 is the identity") {
  Setup s = standing(6);
  const State rest = State::zeros(s.mesh.vertices.size(), 2.0);
  const State next = rk2_step(s.space, s.depth, s.matrices, s.dirichlet, rest, 0.1);
  CHECK(next.t == doctest::Approx(2.1));
  CHECK(next.eta == rest.eta);
  CHECK(next.u == rest.u);

  const State w = exact_state(s.mesh, 0.3);
  const State same = rk2_step(s.space, s.depth, s.matrices, s.dirichlet, w, 0.0);
  CHECK(same == w);
  CHECK_THROWS_AS(rk2_step(s.space, s.depth, s.matrices, s.dirichlet, w, -1.0), SimulationError);
}

TEST_CASE("standing wave returns close to its initial state after one period") {
  const Setup s = standing(16);
  StandingWave wave;
  SimConfig cfg;
  cfg.t_end = wave.period();
  cfg.dt = cfg.t_end / 200;
  const State init = exact_state(s.mesh, 0.0);
  const auto r = run(s.space, s.depth, s.matrices, s.dirichlet, init, cfg);
  CHECK(r.final.t == doctest::Approx(cfg.t_end).epsilon(1e-14));
  CHECK(wave.relative_eta_error(s.mesh, r.final) < 1e-2);
  CHECK(state_distance(r.final, init) < 0.02 * testsupport::max_abs(init.eta) * std::sqrt(double(init.size())));
}

TEST_CASE("property: both schemes are second order in time") {
  // Self-convergence on a fixed mesh isolates the temporal error.
  const Setup s = standing(8);
  const double t_end = StandingWave{}.period();
  const State init = exact_state(s.mesh, 0.0);
  for (auto scheme : {Scheme::heun, Scheme::midpoint}) {
    auto solve = [&](std::size_t steps) {
      SimConfig cfg;
      cfg.t_end = t_end;
      cfg.dt = t_end / steps;
      cfg.scheme = scheme;
      cfg.solver_tol = 1e-13;
      return run(s.space, s.depth, s.matrices, s.dirichlet, init, cfg).final;
    };
    const State ref = solve(2560);
    const double e1 = state_distance(solve(20), ref);
    const double e2 = state_distance(solve(40), ref);
    const double e3 = state_distance(solve(80), ref);
    CAPTURE(e1);
    CAPTURE(e2);
    CAPTURE(e3);
    CHECK(e1 / e2 > 3.2);
    CHECK(e1 / e2 < 4.8);
    CHECK(e2 / e3 > 3.2);
    CHECK(e2 / e3 < 4.8);
  }
}

TEST_CASE("run: t_end = 0 returns the initial state and one snapshot") {
  const Setup s = standing(4);
  const State init = exact_state(s.mesh, 0.0);
  SimConfig cfg;
  cfg.t_end = 0.0;
  Recorder rec;
  SnapshotSink* sinks[] = {&rec};
  const auto r = run(s.space, s.depth, s.matrices, s.dirichlet, init, cfg, sinks);
  CHECK(r.final == init);
  CHECK(rec.steps == std::vector<std::size_t>{0});
  CHECK(r.diagnostics.steps == 0);
  CHECK(r.diagnostics.mass.size() == 1);
}

TEST_CASE("run: rest over variable bathymetry keeps rest and constant mass") {
  testsupport::Gen g(3);
  Mesh m = g.jittered_rectangle(8, 8);
  std::vector<double> d;
  for (std::size_t i = 0; i < m.vertices.size(); ++i) d.push_back(g.uniform(0.5, 2.0));
  auto depth = make_bathymetry(m, d);
  Setup s(std::move(m), std::move(depth), {});
  SimConfig cfg;
  cfg.t_end = 2.0;
  const auto r = run(s.space, s.depth, s.matrices, s.dirichlet, State::zeros(s.mesh.vertices.size()), cfg);
  CHECK(testsupport::max_abs(r.final.eta) == 0.0);
  CHECK(testsupport::max_abs(r.final.u) == 0.0);
  for (const auto& [t, mass] : r.diagnostics.mass) CHECK(mass == 0.0);
}

TEST_CASE("run: coarse mediterranean smoke run") {
  Mesh m = rectangle_mesh({2270, 400}, {2570, 800}, 15, 20);
  auto depth = flat_bathymetry(m, 1.0);
  const auto scenario = mediterranean_scenario();
  const auto dir = scenario.dirichlet(m);
  Setup s(std::move(m), std::move(depth), dir);
  const State init = initial_state(s.mesh, scenario.initial, dir);
  SimConfig cfg;
  cfg.t_end = 50 * cfg.dt;
  cfg.output_every = 10;
  Recorder rec;
  SnapshotSink* sinks[] = {&rec};
  const auto r = run(s.space, s.depth, s.matrices, s.dirichlet, init, cfg, sinks);
  CHECK(r.diagnostics.steps == 50);
  CHECK(r.final.all_finite());
  for (std::size_t i = 0; i < init.size(); ++i) CHECK(r.diagnostics.eta_max[i] >= init.eta[i]);
  CHECK(rec.steps == std::vector<std::size_t>{0, 10, 20, 30, 40, 50});
  // Running maximum is nondecreasing and dominates every emitted field.
  for (std::size_t k = 1; k < rec.maxima.size(); ++k)
    for (std::size_t i = 0; i < init.size(); ++i) {
      CHECK(rec.maxima[k][i] >= rec.maxima[k - 1][i]);
      CHECK(rec.maxima[k][i] >= rec.etas[k][i]);
    }
}

TEST_CASE("run: determinism") {
  const Setup s = standing(10);
  SimConfig cfg;
  cfg.dt = 0.05;
  cfg.t_end = 1.0;
  cfg.gauges = {{0.3, 0.3}};
  const State init = exact_state(s.mesh, 0.0);
  const auto a = run(s.space, s.depth, s.matrices, s.dirichlet, init, cfg);
  const auto b = run(s.space, s.depth, s.matrices, s.dirichlet, init, cfg);
  CHECK(a.final == b.final);
  CHECK(a.diagnostics.mass == b.diagnostics.mass);
  CHECK(a.diagnostics.eta_max == b.diagnostics.eta_max);
}

TEST_CASE("run: step count and a shortened final step") {
  SimConfig cfg;
  cfg.dt = 0.1;
  cfg.t_end = 5.0;
  CHECK(cfg.step_count() == 50);
  cfg.t_end = 0.25;
  CHECK(cfg.step_count() == 3);
  const Setup s = standing(4);
  const auto r = run(s.space, s.depth, s.matrices, s.dirichlet, exact_state(s.mesh, 0.0), cfg);
  CHECK(r.final.t == 0.25);
  CHECK(r.diagnostics.mass.size() == 4);
  cfg.dt = 0.0;
  CHECK_THROWS(cfg.validate());
  cfg.dt = 0.1;
  cfg.t_end = -1.0;
  CHECK_THROWS(cfg.validate());
}

TEST_CASE("run: initial data must satisfy the constraints") {
  const Setup s = standing(4);
  State bad = exact_state(s.mesh, 0.0);
  bad.u[s.dirichlet.u_nodes.front()] = 1e-3;
  SimConfig cfg;
  cfg.t_end = 0.1;
  CHECK_THROWS_AS(run(s.space, s.depth, s.matrices, s.dirichlet, bad, cfg), SimulationError);
}

TEST_CASE("run: blow-up is detected and partial diagnostics survive") {
  Mesh m = rectangle_mesh({0, 0}, {1, 1}, 8, 8);
  auto depth = flat_bathymetry(m, 1.0);
  Setup s(std::move(m), std::move(depth), {});
  State init = State::zeros(s.mesh.vertices.size());
  for (std::size_t i = 0; i < init.size(); ++i) init.eta[i] = 0.5 * std::cos(std::numbers::pi * s.mesh.point(i).x);
  SimConfig cfg;
  cfg.dt = 5.0;
  cfg.t_end = 1000.0;
  try {
    run(s.space, s.depth, s.matrices, s.dirichlet, init, cfg);
    FAIL("expected a blow-up");
  } catch (const RunError& e) {
    CHECK(std::string(e.what()).find("non-finite") != std::string::npos);
    CHECK(e.partial().steps > 0);
    CHECK(e.partial().mass.size() == e.partial().steps + 1);
    CHECK(e.last_state().t == doctest::Approx(5.0 * e.partial().steps));
  }
}

TEST_CASE("run: solver failure is wrapped with partial diagnostics") {
  const Setup s = standing(6);
  SimConfig cfg;
  cfg.t_end = 1.0;
  cfg.solver_tol = 1e-15;
  cfg.solver_maxit = 1;
  try {
    run(s.space, s.depth, s.matrices, s.dirichlet, exact_state(s.mesh, 0.0), cfg);
    FAIL("expected a solver failure");
  } catch (const RunError& e) {
    CHECK(std::string(e.what()).find("solve failed") != std::string::npos);
    CHECK(e.partial().steps == 0);
    CHECK(e.partial().mass.size() == 1);
  }
}

TEST_CASE("discrete_mass") {
  const Mesh m = rectangle_mesh({0, 0}, {2, 3}, 4, 6);
  const auto mass = assemble_mass(P1Space(m));
  const std::size_t n = m.vertices.size();
  CHECK(discrete_mass(mass, Vector(n, 0.0)) == 0.0);
  CHECK(discrete_mass(mass, Vector(n, 1.0)) == doctest::Approx(6.0).epsilon(1e-14));
  // Hat function of an interior node integrates to its support area over 3.
  std::size_t node = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (m.point(i) == Point2{1.0, 1.5}) node = i;
  Vector hat(n, 0.0);
  hat[node] = 1.0;
  double support = 0.0;
  for (std::size_t t = 0; t < m.triangles.size(); ++t) {
    const auto& v = m.triangles[t].v;
    if (v[0] == node || v[1] == node || v[2] == node) support += 0.5 * 0.5 * 0.5;
  }
  CHECK(discrete_mass(mass, hat) == doctest::Approx(support / 3.0).epsilon(1e-14));
}

TEST_CASE("probe_gauges: vertex, centroid and outside") {
  Mesh m;
  m.vertices = {{{0, 0}, 1}, {{1, 0}, 1}, {{0, 1}, 1}};
  m.triangles = {{{0, 1, 2}, 0}};
  State s{0.5, {1.0, 2.0, 3.0}, {0.1, 0.2, 0.3}, {-1.0, 0.0, 1.0}};
  const std::vector<Point2> pts{{0.0, 0.0}, {1.0 / 3.0, 1.0 / 3.0}, {2.0, 2.0}};
  const auto g = probe_gauges(m, s, pts);
  REQUIRE(g[0]);
  CHECK(g[0]->eta == 1.0);
  CHECK(g[0]->u == 0.1);
  CHECK(g[0]->t == 0.5);
  REQUIRE(g[1]);
  CHECK(g[1]->eta == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(g[1]->v == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
  CHECK_FALSE(g[2]);

  const GaugeSet set(m, pts);
  CHECK(set.skipped() == std::vector<std::size_t>{2});
}

TEST_CASE("property: gauges at random mesh vertices return nodal values exactly") {
  testsupport::Gen g(4);
  const Mesh m = g.jittered_rectangle(9, 7);
  State s{0.0, g.vector(m.vertices.size()), g.vector(m.vertices.size()), g.vector(m.vertices.size())};
  std::vector<Point2> pts;
  std::vector<std::size_t> ids;
  for (int k = 0; k < 30; ++k) {
    ids.push_back(g.index(0, m.vertices.size() - 1));
    pts.push_back(m.point(ids.back()));
  }
  const auto samples = probe_gauges(m, s, pts);
  for (std::size_t k = 0; k < pts.size(); ++k) {
    REQUIRE(samples[k]);
    CHECK(samples[k]->eta == s.eta[ids[k]]);
    CHECK(samples[k]->u == s.u[ids[k]]);
    CHECK(samples[k]->v == s.v[ids[k]]);
  }
}

TEST_CASE("run records gauge series and skips outside gauges") {
  const Setup s = standing(6);
  SimConfig cfg;
  cfg.dt = 0.1;
  cfg.t_end = 0.5;
  cfg.gauges = {{0.5, 0.5}, {3.0, 3.0}};
  const auto r = run(s.space, s.depth, s.matrices, s.dirichlet, exact_state(s.mesh, 0.0), cfg);
  CHECK(r.diagnostics.skipped_gauges == std::vector<std::size_t>{1});
  CHECK(r.diagnostics.gauges[0].size() == 6);
  CHECK(r.diagnostics.gauges[1].empty());
  CHECK(r.diagnostics.gauges[0].back().t == doctest::Approx(0.5));
}
