#include <algorithm>
#include <cmath>
#include <numbers>

#include "bbmwave/scenarios.hpp"

namespace bbmwave {

std::vector<std::size_t> LabelSet::nodes(const Mesh& mesh) const {
  if (!all) return boundary_nodes(mesh, labels);
  std::vector<std::size_t> out;
  for (const auto& e : mesh.boundary_edges) out.insert(out.end(), e.v.begin(), e.v.end());
  for (const auto& e : unlabeled_boundary_edges(mesh)) out.insert(out.end(), e.begin(), e.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

DirichletSpec BoundaryAssignment::resolve(const Mesh& mesh) const { return {eta.nodes(mesh), u.nodes(mesh), v.nodes(mesh)}; }

double mediterranean_eta(Point2 p, double px, double py) {
  const double dx = p.x - px, dy = p.y - py;
  const double a = (-70.0 + dy - 0.2 * dx) / 10.0;
  const double b = (-13e4 + 0.2 * dy + dx * 1e3) / std::pow(10.0, 3.5);
  // 1 - 1/(1 + q) written as q/(1 + q) so the far field underflows cleanly.
  const double q = 1e3 * std::exp(-a * a - b * b);
  return 0.1 * (q / (1.0 + q));
}

InitialData ic_mediterranean(double px, double py) {
  return [px, py](Point2 p) { return std::array<double, 3>{mediterranean_eta(p, px, py), 0.0, 0.0}; };
}

ScenarioSpec mediterranean_scenario(double px, double py) {
  ScenarioSpec s;
  s.name = "mediterranean";
  s.initial = ic_mediterranean(px, py);
  const BoundaryAssignment bc{LabelSet::every(), LabelSet::every(), LabelSet::every()};
  s.dirichlet = [bc](const Mesh& m) { return bc.resolve(m); };
  s.flat_depth = 1.0;
  return s;
}

CyprusVariant parse_cyprus_variant(const std::string& name) {
  if (name == "as_printed") return CyprusVariant::as_printed;
  if (name == "sum_exponent") return CyprusVariant::sum_exponent;
  throw ScenarioError("unknown cyprus variant '" + name + "' (expected as_printed or sum_exponent)");
}

const char* to_string(CyprusVariant v) { return v == CyprusVariant::as_printed ? "as_printed" : "sum_exponent"; }

double cyprus_eta(Point2 p, CyprusVariant variant) {
  const double px = (p.x - 3350.0) / 3.0;
  const double qy = (p.y - 3380.0) / 10.0;
  const double exponent = variant == CyprusVariant::as_printed ? -(px * px) * (qy * qy) : -(px * px) - (qy * qy);
  return 0.01 * std::exp(exponent);
}

InitialData ic_cyprus(CyprusVariant variant) {
  return [variant](Point2 p) { return std::array<double, 3>{cyprus_eta(p, variant), 0.0, 0.0}; };
}

ScenarioSpec cyprus_scenario(CyprusVariant variant) {
  ScenarioSpec s;
  s.name = "cyprus";
  s.initial = ic_cyprus(variant);
  const BoundaryAssignment bc{LabelSet::of({labels::shoreline}), LabelSet::of({labels::shoreline}),
                              LabelSet::of({labels::shoreline})};
  s.dirichlet = [bc](const Mesh& m) { return bc.resolve(m); };
  return s;
}

double dispersion_omega(double k, double b, double d, double depth0) {
  if (!(k > 0.0)) throw ScenarioError("dispersion_omega: k must be positive");
  const double kd2 = k * k * depth0 * depth0;
  return k * std::sqrt(depth0 / ((1.0 + b * kd2) * (1.0 + d * kd2)));
}

double StandingWave::k() const { return mode * std::numbers::pi / length; }

double StandingWave::omega() const { return dispersion_omega(k(), params.b, params.d, depth0); }

double StandingWave::period() const { return 2.0 * std::numbers::pi / omega(); }

double StandingWave::velocity_amplitude() const {
  const double kk = k();
  return amplitude * kk / (omega() * (1.0 + params.d * kk * kk * depth0 * depth0));
}

std::array<double, 3> StandingWave::exact(Point2 p, double t) const {
  const double kk = k(), w = omega();
  return {amplitude * std::cos(w * t) * std::cos(kk * p.x), velocity_amplitude() * std::sin(w * t) * std::sin(kk * p.x),
          0.0};
}

InitialData StandingWave::initial() const {
  const StandingWave self = *this;
  return [self](Point2 p) { return self.exact(p, 0.0); };
}

DirichletSpec StandingWave::dirichlet(const Mesh& mesh) const {
  const double tol = tolerances(mesh).geometric;
  DirichletSpec spec;
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    const Point2 p = mesh.point(i);
    if (std::abs(p.x) <= tol || std::abs(p.x - length) <= tol) spec.u_nodes.push_back(i);
    if (std::abs(p.y) <= tol || std::abs(p.y - width) <= tol) spec.v_nodes.push_back(i);
  }
  return spec;
}

ScenarioSpec StandingWave::scenario() const {
  ScenarioSpec s;
  s.name = "standing_wave";
  s.initial = initial();
  const StandingWave self = *this;
  s.dirichlet = [self](const Mesh& m) { return self.dirichlet(m); };
  s.flat_depth = depth0;
  s.params = params;
  return s;
}

double StandingWave::relative_eta_error(const Mesh& mesh, const State& state) const {
  if (state.eta.size() != mesh.vertices.size()) throw ScenarioError("state does not match the mesh");
  double err = 0.0, ref = 0.0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& v = mesh.triangles[t].v;
    const auto c = mesh.corners(t);
    const double area = 0.5 * signed_area2(c[0], c[1], c[2]);
    for (const auto& q : dunavant_degree6()) {
      const Point2 p = q.bary[0] * c[0] + q.bary[1] * c[1] + q.bary[2] * c[2];
      const double eh = q.bary[0] * state.eta[v[0]] + q.bary[1] * state.eta[v[1]] + q.bary[2] * state.eta[v[2]];
      const double ex = exact(p, state.t)[0];
      err += area * q.weight * (eh - ex) * (eh - ex);
      ref += area * q.weight * ex * ex;
    }
  }
  return std::sqrt(err / ref);
}

ScenarioSpec rest_scenario(BoundaryAssignment bc, std::optional<double> flat_depth) {
  ScenarioSpec s;
  s.name = "rest";
  s.initial = [](Point2) { return std::array<double, 3>{0.0, 0.0, 0.0}; };
  s.dirichlet = [bc](const Mesh& m) { return bc.resolve(m); };
  s.flat_depth = flat_depth;
  return s;
}

State initial_state(const Mesh& mesh, const InitialData& data, const DirichletSpec& dirichlet,
                    InitialStateReport* report) {
  const std::size_t n = mesh.vertices.size();
  State s = State::zeros(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto [eta, u, v] = data(mesh.point(i));
    s.eta[i] = eta;
    s.u[i] = u;
    s.v[i] = v;
  }
  if (!s.all_finite()) throw ScenarioError("initial data evaluate to non-finite values");
  InitialStateReport r;
  for (Field f : {Field::eta, Field::u, Field::v}) {
    Vector& x = f == Field::eta ? s.eta : (f == Field::u ? s.u : s.v);
    for (auto i : dirichlet.nodes(f)) {
      if (i >= n) throw ScenarioError("constrained node outside the mesh");
      if (x[i] != 0.0) {
        r.max_clamp = std::max(r.max_clamp, std::abs(x[i]));
        ++r.clamped_nodes;
        x[i] = 0.0;
      }
    }
  }
  if (report) *report = r;
  return s;
}

}  // namespace bbmwave
