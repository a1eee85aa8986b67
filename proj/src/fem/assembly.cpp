#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

#include "bbmwave/fem.hpp"
#include "parallel.hpp"

namespace bbmwave {

void ModelParams::validate() const {
  if (!(std::isfinite(b) && b > 0.0)) throw FemError("model.b must be positive");
  if (!(std::isfinite(d) && d > 0.0)) throw FemError("model.d must be positive");
}

bool State::all_finite() const {
  const auto finite = [](const Vector& x) { return std::all_of(x.begin(), x.end(), [](double e) { return std::isfinite(e); }); };
  return std::isfinite(t) && finite(eta) && finite(u) && finite(v);
}

const std::vector<std::size_t>& DirichletSpec::nodes(Field f) const {
  switch (f) {
    case Field::eta:
      return eta_nodes;
    case Field::u:
      return u_nodes;
    default:
      return v_nodes;
  }
}

DirichletSpec dirichlet_from_labels(const Mesh& mesh, std::span<const int> eta_labels, std::span<const int> u_labels,
                                    std::span<const int> v_labels) {
  return {boundary_nodes(mesh, eta_labels), boundary_nodes(mesh, u_labels), boundary_nodes(mesh, v_labels)};
}

std::size_t worker_count() {
  if (const char* env = std::getenv("BBMWAVE_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n >= 1) return static_cast<std::size_t>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

P1Space::P1Space(const Mesh& mesh) : mesh_(&mesh), geometry_(mesh.triangles.size()) {
  if (mesh.empty()) throw FemError("cannot build a finite element space on an empty mesh");
  for (std::size_t t = 0; t < geometry_.size(); ++t) geometry_[t] = triangle_geometry(mesh, t);
}

namespace {

using ElementMatrix = std::array<std::array<double, 3>, 3>;

// Element matrices are computed in parallel into fixed slots; the triplet list
// is filled in element order so the assembled values never depend on threads.
template <typename Local>
SparseMatrix assemble(const P1Space& space, Local&& local) {
  const std::size_t nt = space.elements();
  std::vector<Triplet> triplets(9 * nt);
  detail::parallel_for(nt, [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      const ElementMatrix m = local(t);
      const auto& v = space.nodes(t);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) triplets[9 * t + 3 * i + j] = {v[i], v[j], m[i][j]};
    }
  });
  return assemble_from_triplets(triplets, space.dofs());
}

void check_depth(const P1Space& space, const BathymetryField& depth) {
  if (depth.depth.size() != space.dofs() || depth.grad_depth2.size() != space.elements())
    throw FemError("bathymetry field is not bound to this mesh");
}

}  // namespace

SparseMatrix assemble_mass(const P1Space& space) {
  return assemble(space, [&](std::size_t t) {
    const double a = space.element(t).area / 12.0;
    ElementMatrix m;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m[i][j] = i == j ? 2.0 * a : a;
    return m;
  });
}

SparseMatrix assemble_weighted_stiffness(const P1Space& space, const BathymetryField& depth) {
  check_depth(space, depth);
  return assemble(space, [&](std::size_t t) {
    const auto& geo = space.element(t);
    const auto& v = space.nodes(t);
    double d2 = 0.0;
    for (auto n : v) d2 += depth.depth[n] * depth.depth[n];
    const double w = d2 / 3.0 * geo.area;
    ElementMatrix m;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m[i][j] = w * dot(geo.grad[i], geo.grad[j]);
    return m;
  });
}

SparseMatrix assemble_advective_coupling(const P1Space& space, const BathymetryField& depth) {
  check_depth(space, depth);
  return assemble(space, [&](std::size_t t) {
    const auto& geo = space.element(t);
    const Vec2 g = depth.grad_depth2[t];
    ElementMatrix m;
    for (int j = 0; j < 3; ++j) {
      const double value = dot(g, geo.grad[j]) * geo.area / 3.0;
      for (int i = 0; i < 3; ++i) m[i][j] = value;
    }
    return m;
  });
}

SystemMatrices build_system_matrices(const P1Space& space, const BathymetryField& depth, const ModelParams& params,
                                     const DirichletSpec& dirichlet) {
  if (!(std::isfinite(params.b) && params.b >= 0.0 && std::isfinite(params.d) && params.d >= 0.0))
    throw FemError("model parameters b and d must be finite and nonnegative");
  const std::size_t n = space.dofs();
  for (Field f : {Field::eta, Field::u, Field::v})
    for (auto i : dirichlet.nodes(f))
      if (i >= n) throw FemError("Dirichlet node " + std::to_string(i) + " is not a mesh vertex");

  SystemMatrices out;
  out.mass = assemble_mass(space);
  const SparseMatrix k = assemble_weighted_stiffness(space, depth);
  const SparseMatrix nk = linear_combination(1.0, assemble_advective_coupling(space, depth), 1.0, k);
  out.a_eta = linear_combination(1.0, out.mass, params.b, k);
  out.a_u = linear_combination(1.0, out.mass, params.d, nk);
  out.a_v = out.a_u;
  for (auto i : dirichlet.eta_nodes) out.a_eta.set_identity_row(i);
  for (auto i : dirichlet.u_nodes) out.a_u.set_identity_row(i);
  for (auto i : dirichlet.v_nodes) out.a_v.set_identity_row(i);
  return out;
}

Vector apply_dirichlet_rhs(const DirichletSpec& spec, Vector f, Field field) {
  for (auto i : spec.nodes(field)) {
    if (i >= f.size()) throw FemError("Dirichlet node " + std::to_string(i) + " outside the right-hand side");
    f[i] = 0.0;
  }
  return f;
}

}  // namespace bbmwave
