#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "bbmwave/bathymetry.hpp"
#include "bbmwave/linalg.hpp"
#include "bbmwave/mesh.hpp"

namespace bbmwave {

class FemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ModelParams {
  double b = 1.0 / 6.0;
  double d = 1.0 / 6.0;

  void validate() const;
};

/// Nodal coefficients of the P1 fields.
struct State {
  double t = 0.0;
  Vector eta;
  Vector u;
  Vector v;

  static State zeros(std::size_t n, double t = 0.0) { return {t, Vector(n, 0.0), Vector(n, 0.0), Vector(n, 0.0)}; }
  std::size_t size() const { return eta.size(); }
  bool all_finite() const;

  friend bool operator==(const State&, const State&) = default;
};

enum class Field { eta, u, v };
enum class Component { x, y };

/// Homogeneous Dirichlet constraints; each list sorted and duplicate free.
struct DirichletSpec {
  std::vector<std::size_t> eta_nodes;
  std::vector<std::size_t> u_nodes;
  std::vector<std::size_t> v_nodes;

  const std::vector<std::size_t>& nodes(Field f) const;
};

/// Constrains every node on a boundary edge whose label is listed for that field.
DirichletSpec dirichlet_from_labels(const Mesh& mesh, std::span<const int> eta_labels, std::span<const int> u_labels,
                                    std::span<const int> v_labels);

struct QuadraturePoint {
  std::array<double, 3> bary;
  double weight;  // weights sum to 1; multiply by the triangle area
};

/// Symmetric 6-point rule, exact for polynomials of degree 4.
std::span<const QuadraturePoint> dunavant_degree4();
/// Symmetric 12-point rule, exact for polynomials of degree 6.
std::span<const QuadraturePoint> dunavant_degree6();

/// Per-triangle areas and hat-function gradients, computed once.
class P1Space {
 public:
  explicit P1Space(const Mesh& mesh);

  const Mesh& mesh() const { return *mesh_; }
  std::size_t dofs() const { return mesh_->vertices.size(); }
  std::size_t elements() const { return geometry_.size(); }
  const TriangleGeometry& element(std::size_t t) const { return geometry_[t]; }
  const std::array<std::size_t, 3>& nodes(std::size_t t) const { return mesh_->triangles[t].v; }

 private:
  const Mesh* mesh_;
  std::vector<TriangleGeometry> geometry_;
};

SparseMatrix assemble_mass(const P1Space& space);
SparseMatrix assemble_weighted_stiffness(const P1Space& space, const BathymetryField& depth);
SparseMatrix assemble_advective_coupling(const P1Space& space, const BathymetryField& depth);

/// The velocity operator M + d N + d K is stored once per component because
/// u and v may be constrained on different nodes.
struct SystemMatrices {
  SparseMatrix mass;
  SparseMatrix a_eta;  // M + b K, eta-constrained rows replaced
  SparseMatrix a_u;    // M + d N + d K, u-constrained rows replaced
  SparseMatrix a_v;    // M + d N + d K, v-constrained rows replaced
};

SystemMatrices build_system_matrices(const P1Space& space, const BathymetryField& depth, const ModelParams& params,
                                     const DirichletSpec& dirichlet);

/// -int div((D + eta) V) phi_i.
Vector eta_rhs(const P1Space& space, const BathymetryField& depth, const State& state,
               std::span<const QuadraturePoint> rule = dunavant_degree4());

/// -int (d_c eta + u d_c u + v d_c v) phi_i for c = x or y.
Vector velocity_rhs(const P1Space& space, const State& state, Component c,
                    std::span<const QuadraturePoint> rule = dunavant_degree4());

/// Zeroes the entries of the constrained nodes of the given field.
Vector apply_dirichlet_rhs(const DirichletSpec& spec, Vector f, Field field);

/// Worker count for element loops: BBMWAVE_THREADS if set, else the hardware
/// concurrency. Results never depend on it.
std::size_t worker_count();

}  // namespace bbmwave
