#include <array>

#include "bbmwave/fem.hpp"
#include "parallel.hpp"

namespace bbmwave {

namespace {

using Local = std::array<double, 3>;

// Element vectors land in per-element slots and are summed into the global
// vector in element order afterwards.
template <typename Element>
Vector gather(const P1Space& space, Element&& element) {
  const std::size_t nt = space.elements();
  std::vector<Local> local(nt);
  detail::parallel_for(nt, [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) local[t] = element(t);
  });
  Vector f(space.dofs(), 0.0);
  for (std::size_t t = 0; t < nt; ++t) {
    const auto& v = space.nodes(t);
    for (int i = 0; i < 3; ++i) f[v[i]] += local[t][i];
  }
  return f;
}

void check_state(const P1Space& space, const State& state) {
  const std::size_t n = space.dofs();
  if (state.eta.size() != n || state.u.size() != n || state.v.size() != n)
    throw FemError("state does not match the mesh");
}

struct Nodal {
  Local val;
  Vec2 grad;
};

Nodal restrict_to(const Vector& x, const std::array<std::size_t, 3>& v, const TriangleGeometry& geo) {
  Nodal out{{x[v[0]], x[v[1]], x[v[2]]}, {0.0, 0.0}};
  for (int i = 0; i < 3; ++i) out.grad = out.grad + out.val[i] * geo.grad[i];
  return out;
}

double at(const Nodal& f, const std::array<double, 3>& bary) {
  return f.val[0] * bary[0] + f.val[1] * bary[1] + f.val[2] * bary[2];
}

}  // namespace

Vector eta_rhs(const P1Space& space, const BathymetryField& depth, const State& state,
               std::span<const QuadraturePoint> rule) {
  check_state(space, state);
  if (depth.depth.size() != space.dofs()) throw FemError("bathymetry field is not bound to this mesh");
  return gather(space, [&](std::size_t t) {
    const auto& geo = space.element(t);
    const auto& v = space.nodes(t);
    const Nodal dd = restrict_to(depth.depth, v, geo);
    const Nodal eta = restrict_to(state.eta, v, geo);
    const Nodal u = restrict_to(state.u, v, geo);
    const Nodal w = restrict_to(state.v, v, geo);
    const double div = u.grad.x + w.grad.y;
    const Vec2 gh = dd.grad + eta.grad;
    Local out{0.0, 0.0, 0.0};
    for (const auto& q : rule) {
      const double h = at(dd, q.bary) + at(eta, q.bary);
      const double flux_div = h * div + gh.x * at(u, q.bary) + gh.y * at(w, q.bary);
      for (int i = 0; i < 3; ++i) out[i] -= q.weight * flux_div * q.bary[i];
    }
    for (auto& e : out) e *= geo.area;
    return out;
  });
}

Vector velocity_rhs(const P1Space& space, const State& state, Component c, std::span<const QuadraturePoint> rule) {
  check_state(space, state);
  const bool x = c == Component::x;
  return gather(space, [&](std::size_t t) {
    const auto& geo = space.element(t);
    const auto& v = space.nodes(t);
    const Nodal eta = restrict_to(state.eta, v, geo);
    const Nodal u = restrict_to(state.u, v, geo);
    const Nodal w = restrict_to(state.v, v, geo);
    const double eta_c = x ? eta.grad.x : eta.grad.y;
    const double u_c = x ? u.grad.x : u.grad.y;
    const double v_c = x ? w.grad.x : w.grad.y;
    Local out{0.0, 0.0, 0.0};
    for (const auto& q : rule) {
      const double f = eta_c + at(u, q.bary) * u_c + at(w, q.bary) * v_c;
      for (int i = 0; i < 3; ++i) out[i] -= q.weight * f * q.bary[i];
    }
    for (auto& e : out) e *= geo.area;
    return out;
  });
}

}  // namespace bbmwave
