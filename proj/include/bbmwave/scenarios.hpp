#pragma once

#include <array>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bbmwave/fem.hpp"
#include "bbmwave/mesh.hpp"

namespace bbmwave {

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// (eta0, u0, v0) at a point.
using InitialData = std::function<std::array<double, 3>(Point2)>;

/// Boundary labels selecting constrained nodes; `all` means every boundary node.
struct LabelSet {
  bool all = false;
  std::vector<int> labels;

  static LabelSet every() { return {true, {}}; }
  static LabelSet of(std::vector<int> l) { return {false, std::move(l)}; }
  std::vector<std::size_t> nodes(const Mesh& mesh) const;
};

struct BoundaryAssignment {
  LabelSet eta;
  LabelSet u;
  LabelSet v;

  DirichletSpec resolve(const Mesh& mesh) const;
};

struct ScenarioSpec {
  std::string name;
  InitialData initial;
  /// Dirichlet nodes for a given mesh.
  std::function<DirichletSpec(const Mesh&)> dirichlet;
  std::optional<double> flat_depth;  // nullopt: depth comes from a bathymetry grid
  ModelParams params;
};

inline constexpr double kMediterraneanPX = 2270.0;
inline constexpr double kMediterraneanPY = 500.0;

double mediterranean_eta(Point2 p, double px = kMediterraneanPX, double py = kMediterraneanPY);
InitialData ic_mediterranean(double px = kMediterraneanPX, double py = kMediterraneanPY);
/// Mediterranean initial data, Dirichlet on every field over the whole boundary, D = 1.
ScenarioSpec mediterranean_scenario(double px = kMediterraneanPX, double py = kMediterraneanPY);

enum class CyprusVariant { as_printed, sum_exponent };

CyprusVariant parse_cyprus_variant(const std::string& name);
const char* to_string(CyprusVariant v);

double cyprus_eta(Point2 p, CyprusVariant variant);
InitialData ic_cyprus(CyprusVariant variant);
/// Cyprus initial data, Dirichlet on label 1, natural on label 2, depth from bathymetry.
ScenarioSpec cyprus_scenario(CyprusVariant variant);

/// omega(k) of the flat-bottom equations linearized about depth D0.
double dispersion_omega(double k, double b, double d, double depth0 = 1.0);

/// Linear standing wave in [0, L] x [0, W] over flat depth D0, used as an
/// analytic oracle.
struct StandingWave {
  double amplitude = 1e-5;
  int mode = 1;
  double length = 1.0;
  double width = 1.0;
  ModelParams params;
  double depth0 = 1.0;

  double k() const;
  double omega() const;
  double period() const;
  /// Amplitude of u: c * omega * (1 + d k^2 D0^2) = a k.
  double velocity_amplitude() const;

  std::array<double, 3> exact(Point2 p, double t) const;
  InitialData initial() const;
  /// u fixed on x = 0 and x = L, v fixed on y = 0 and y = W, eta free.
  DirichletSpec dirichlet(const Mesh& mesh) const;
  ScenarioSpec scenario() const;
  /// ||eta_h - eta|| / ||eta|| in L2 at state.t, by 12-point quadrature.
  double relative_eta_error(const Mesh& mesh, const State& state) const;
};

/// eta = u = v = 0 with the given boundary assignment.
ScenarioSpec rest_scenario(BoundaryAssignment bc, std::optional<double> flat_depth);

struct InitialStateReport {
  double max_clamp = 0.0;       // largest |value| overwritten with 0 on a constrained node
  std::size_t clamped_nodes = 0;
};

/// Samples the initial data at the vertices and sets constrained nodes to
/// exactly 0, recording what was overwritten.
State initial_state(const Mesh& mesh, const InitialData& data, const DirichletSpec& dirichlet,
                    InitialStateReport* report = nullptr);

}  // namespace bbmwave
