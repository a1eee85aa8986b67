#include <cmath>
#include <cstdlib>

#include "doctest.h"
#include "gen.hpp"
#include "oracles.hpp"

#include "bbmwave/fem.hpp"

using namespace bbmwave;

namespace {

Mesh unit_triangle() {
  Mesh m;
  m.vertices = {{{0, 0}, 1}, {{1, 0}, 1}, {{0, 1}, 1}};
  m.triangles = {{{0, 1, 2}, 0}};
  m.boundary_edges = {{{0, 1}, 1}, {{1, 2}, 1}, {{2, 0}, 1}};
  return m;
}

double sum(const SparseMatrix& a) {
  double s = 0.0;
  for (double v : a.values()) s += v;
  return s;
}

State random_state(testsupport::Gen& g, std::size_t n) {
  return {0.0, g.vector(n, -0.1, 0.1), g.vector(n), g.vector(n)};
}

// Integral of -(D + eta) V.n over the boundary of [0, W] x [0, H], by
// Simpson's rule per edge (the integrand is quadratic along each edge).
double boundary_flux(const Mesh& m, const Vector& depth, const State& s, double w) {
  double total = 0.0;
  for (const auto& e : m.boundary_edges) {
    const auto a = e.v[0], b = e.v[1];
    const Point2 pa = m.point(a), pb = m.point(b);
    const Point2 mid = 0.5 * (pa + pb);
    Vec2 n{};
    if (mid.x <= 1e-12) n = {-1, 0};
    else if (mid.x >= w - 1e-12) n = {1, 0};
    else if (mid.y <= 1e-12) n = {0, -1};
    else n = {0, 1};
    auto flux = [&](double t) {
      const double dd = (1 - t) * depth[a] + t * depth[b];
      const double eta = (1 - t) * s.eta[a] + t * s.eta[b];
      const double u = (1 - t) * s.u[a] + t * s.u[b];
      const double v = (1 - t) * s.v[a] + t * s.v[b];
      return (dd + eta) * (u * n.x + v * n.y);
    };
    total -= distance(pa, pb) * (flux(0) + 4 * flux(0.5) + flux(1)) / 6.0;
  }
  return total;
}

}  // namespace

TEST_CASE("element mass and stiffness on the unit right triangle") {
  const Mesh m = unit_triangle();
  const P1Space space(m);
  const auto depth = flat_bathymetry(m, 1.0);
  const auto mass = assemble_mass(space);
  const auto stiff = assemble_weighted_stiffness(space, depth);
  const auto mo = testsupport::unit_triangle_mass();
  const auto ko = testsupport::unit_triangle_stiffness();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      CHECK(std::abs(mass.at(i, j) - mo[i][j]) <= 1e-14);
      CHECK(std::abs(stiff.at(i, j) - ko[i][j]) <= 1e-14);
    }
  const auto n = assemble_advective_coupling(space, depth);
  for (double v : n.values()) CHECK(v == 0.0);
}

TEST_CASE("mass matrix integrates constants") {
  testsupport::Gen g(1);
  for (int trial = 0; trial < 10; ++trial) {
    const double w = g.uniform(0.5, 3.0), h = g.uniform(0.5, 3.0);
    const Mesh m = g.jittered_rectangle(g.index(1, 12), g.index(1, 12), w, h);
    const auto mass = assemble_mass(P1Space(m));
    CHECK(sum(mass) == doctest::Approx(w * h).epsilon(1e-13));
    for (std::size_t i = 0; i < mass.rows(); ++i) {
      double r = 0.0;
      for (std::size_t k = mass.row_offsets()[i]; k < mass.row_offsets()[i + 1]; ++k) r += mass.values()[k];
      CHECK(r > 0.0);
    }
  }
  const Mesh sq = rectangle_mesh({0, 0}, {1, 1}, 1, 1);
  const auto ones = spmv(assemble_mass(P1Space(sq)), Vector(4, 1.0));
  double s = 0.0;
  for (double x : ones) s += x;
  CHECK(s == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("stiffness annihilates constants and scales with D^2") {
  testsupport::Gen g(2);
  const Mesh m = g.jittered_rectangle(7, 5, 2.0, 1.0);
  const P1Space space(m);
  std::vector<double> d(m.vertices.size());
  for (auto& x : d) x = g.uniform(0.5, 2.0);
  const auto k = assemble_weighted_stiffness(space, make_bathymetry(m, d));
  CHECK(testsupport::max_abs(spmv(k, Vector(m.vertices.size(), 3.0))) <= 1e-13);
  const auto k1 = assemble_weighted_stiffness(space, flat_bathymetry(m, 1.0));
  const auto k2 = assemble_weighted_stiffness(space, flat_bathymetry(m, 2.0));
  for (std::size_t i = 0; i < k1.nonzeros(); ++i) CHECK(k2.values()[i] == 4.0 * k1.values()[i]);
}

TEST_CASE("coupling: D^2 linear on the unit triangle, closed-form rows") {
  const double s = 0.3;
  const Mesh m = unit_triangle();
  // D_i^2 = 1 + s x_i, so grad(D^2) = (s, 0); N_ij = s grad_j.x area / 3.
  const auto depth = make_bathymetry(m, {1.0, std::sqrt(1.0 + s), 1.0});
  const auto n = assemble_advective_coupling(P1Space(m), depth);
  const double gx[] = {-1.0, 1.0, 0.0};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(n.at(i, j) == doctest::Approx(s * gx[j] / 6.0).epsilon(1e-13).scale(1e-14));
  CHECK(testsupport::max_abs(spmv(n, Vector(3, 1.0))) <= 1e-15);
}

TEST_CASE("coupling is nonsymmetric for variable depth") {
  testsupport::Gen g(3);
  const Mesh m = g.jittered_rectangle(4, 4);
  std::vector<double> d;
  for (const auto& v : m.vertices) d.push_back(1.0 + 0.5 * v.position.x + 0.2 * v.position.y * v.position.y);
  const auto n = assemble_advective_coupling(P1Space(m), make_bathymetry(m, d));
  CHECK_FALSE(is_symmetric(n, 1e-6));
  CHECK(testsupport::max_abs(spmv(n, Vector(m.vertices.size(), 1.0))) <= 1e-14);
}

TEST_CASE("property: M and K symmetric, K semidefinite, A_eta definite") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    testsupport::Gen g(seed);
    const Mesh m = g.jittered_rectangle(g.index(2, 10), g.index(2, 10), g.uniform(0.5, 5), g.uniform(0.5, 5));
    const P1Space space(m);
    std::vector<double> d;
    for (std::size_t i = 0; i < m.vertices.size(); ++i) d.push_back(g.uniform(0.1, 3.0));
    const auto depth = make_bathymetry(m, d);
    const auto mass = assemble_mass(space);
    const auto k = assemble_weighted_stiffness(space, depth);
    CHECK(is_symmetric(mass, 1e-14));
    CHECK(is_symmetric(k, 1e-14));
    const auto sys = build_system_matrices(space, depth, {}, {});
    CHECK(is_symmetric(sys.a_eta, 1e-14));
    CHECK(mass.same_pattern(k));
    CHECK(mass.same_pattern(sys.a_u));
    for (int trial = 0; trial < 20; ++trial) {
      const Vector x = g.vector(m.vertices.size());
      const double xx = dot(x, x);
      CHECK(dot(x, spmv(k, x)) >= -1e-12 * xx);
      CHECK(dot(x, spmv(sys.a_eta, x)) > 0.0);
    }
  }
}

TEST_CASE("build_system_matrices: parameter limits and constrained rows") {
  const Mesh m = rectangle_mesh({0, 0}, {1, 1}, 4, 4);
  const P1Space space(m);
  const auto depth = flat_bathymetry(m, 1.0);
  const auto mass = assemble_mass(space);
  const auto k = assemble_weighted_stiffness(space, depth);

  const auto zero = build_system_matrices(space, depth, {0.0, 0.0}, {});
  CHECK(zero.a_eta == mass);
  CHECK(zero.a_u == mass);
  CHECK(zero.a_v == mass);

  const auto flat = build_system_matrices(space, depth, {}, {});
  for (std::size_t i = 0; i < mass.nonzeros(); ++i) {
    const double expect = mass.values()[i] + k.values()[i] / 6.0;
    CHECK(flat.a_eta.values()[i] == doctest::Approx(expect).epsilon(1e-15));
    CHECK(flat.a_u.values()[i] == doctest::Approx(expect).epsilon(1e-15));
  }

  DirichletSpec spec;
  spec.eta_nodes = {3};
  spec.v_nodes = {7};
  const auto c = build_system_matrices(space, depth, {}, spec);
  for (std::size_t j = 0; j < m.vertices.size(); ++j) {
    CHECK(c.a_eta.at(3, j) == (j == 3 ? 1.0 : 0.0));
    CHECK(c.a_v.at(7, j) == (j == 7 ? 1.0 : 0.0));
  }
  CHECK(c.a_u.at(7, 7) == flat.a_u.at(7, 7));
  CHECK(c.a_eta.at(4, 4) == flat.a_eta.at(4, 4));
  spec.u_nodes = {999};
  CHECK_THROWS(build_system_matrices(space, depth, {}, spec));
}

TEST_CASE("Neumann is natural: boundary labels do not enter assembly") {
  RectangleLabels open{labels::open_sea, labels::open_sea, labels::open_sea, labels::open_sea};
  const Mesh a = rectangle_mesh({0, 0}, {2, 1}, 6, 3, open);
  const Mesh b = rectangle_mesh({0, 0}, {2, 1}, 6, 3);
  std::vector<double> d;
  for (const auto& v : a.vertices) d.push_back(1.0 + 0.1 * v.position.x);
  const auto sa = build_system_matrices(P1Space(a), make_bathymetry(a, d), {}, {});
  const auto sb = build_system_matrices(P1Space(b), make_bathymetry(b, d), {}, {});
  CHECK(sa.a_eta == sb.a_eta);
  CHECK(sa.a_u == sb.a_u);
  CHECK(sa.mass == sb.mass);
}

TEST_CASE("eta_rhs: zero velocity, uniform flow, u = x") {
  const Mesh m = rectangle_mesh({0, 0}, {1, 1}, 6, 6);
  const P1Space space(m);
  const auto depth = flat_bathymetry(m, 1.0);
  const std::size_t n = m.vertices.size();
  testsupport::Gen g(4);

  State rest{0.0, g.vector(n), Vector(n, 0.0), Vector(n, 0.0)};
  CHECK(testsupport::max_abs(eta_rhs(space, depth, rest)) == 0.0);

  State uniform = State::zeros(n);
  uniform.u.assign(n, 0.7);
  const auto f = eta_rhs(space, depth, uniform);
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 p = m.point(i);
    if (p.x > 0 && p.x < 1 && p.y > 0 && p.y < 1) CHECK(std::abs(f[i]) <= 1e-15);
  }

  State ux = State::zeros(n);
  for (std::size_t i = 0; i < n; ++i) ux.u[i] = m.point(i).x;
  const auto fx = eta_rhs(space, depth, ux);
  // -int phi_i = -(area of the support) / 3.
  Vector support(n, 0.0);
  for (std::size_t t = 0; t < m.triangles.size(); ++t) {
    const auto c = m.corners(t);
    const double area = 0.5 * std::abs(signed_area2(c[0], c[1], c[2]));
    for (auto v : m.triangles[t].v) support[v] += area;
  }
  for (std::size_t i = 0; i < n; ++i) CHECK(fx[i] == doctest::Approx(-support[i] / 3.0).epsilon(1e-13));
}

TEST_CASE("velocity_rhs: rest, uniform pressure gradient, constant velocity") {
  const Mesh m = rectangle_mesh({0, 0}, {1, 1}, 5, 5);
  const P1Space space(m);
  const std::size_t n = m.vertices.size();
  CHECK(testsupport::max_abs(velocity_rhs(space, State::zeros(n), Component::x)) == 0.0);

  State p = State::zeros(n);
  for (std::size_t i = 0; i < n; ++i) p.eta[i] = m.point(i).x;
  const auto fx = velocity_rhs(space, p, Component::x);
  const auto row = spmv(assemble_mass(space), Vector(n, 1.0));
  for (std::size_t i = 0; i < n; ++i) CHECK(fx[i] == doctest::Approx(-row[i]).epsilon(1e-13));
  CHECK(testsupport::max_abs(velocity_rhs(space, p, Component::y)) <= 1e-16);

  State c = State::zeros(n);
  c.u.assign(n, 2.5);
  CHECK(testsupport::max_abs(velocity_rhs(space, c, Component::x)) <= 1e-15);
  CHECK(testsupport::max_abs(velocity_rhs(space, c, Component::y)) <= 1e-15);
}

TEST_CASE("property: summed eta_rhs equals the boundary flux") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    testsupport::Gen g(seed);
    const double w = g.uniform(0.5, 2.0), h = g.uniform(0.5, 2.0);
    const Mesh m = g.jittered_rectangle(g.index(2, 9), g.index(2, 9), w, h);
    std::vector<double> d;
    for (std::size_t i = 0; i < m.vertices.size(); ++i) d.push_back(g.uniform(0.5, 2.0));
    const auto depth = make_bathymetry(m, d);
    const State s = random_state(g, m.vertices.size());
    const auto f = eta_rhs(P1Space(m), depth, s);
    double total = 0.0;
    for (double x : f) total += x;
    CHECK(total == doctest::Approx(boundary_flux(m, depth.depth, s, w)).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("property: summed velocity_rhs equals the boundary integral of eta + |V|^2 / 2") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    testsupport::Gen g(seed);
    const Mesh m = g.jittered_rectangle(g.index(2, 9), g.index(2, 9));
    const State s = random_state(g, m.vertices.size());
    const auto fx = velocity_rhs(P1Space(m), s, Component::x);
    const auto fy = velocity_rhs(P1Space(m), s, Component::y);
    double sx = 0.0, sy = 0.0, bx = 0.0, by = 0.0;
    for (std::size_t i = 0; i < fx.size(); ++i) {
      sx += fx[i];
      sy += fy[i];
    }
    for (const auto& e : m.boundary_edges) {
      const auto a = e.v[0], b = e.v[1];
      const Point2 pa = m.point(a), pb = m.point(b), mid = 0.5 * (pa + pb);
      const Vec2 n = mid.x <= 1e-12 ? Vec2{-1, 0} : mid.x >= 1 - 1e-12 ? Vec2{1, 0} : mid.y <= 1e-12 ? Vec2{0, -1} : Vec2{0, 1};
      auto q = [&](double t) {
        const double eta = (1 - t) * s.eta[a] + t * s.eta[b];
        const double u = (1 - t) * s.u[a] + t * s.u[b];
        const double v = (1 - t) * s.v[a] + t * s.v[b];
        return eta + 0.5 * (u * u + v * v);
      };
      const double integral = distance(pa, pb) * (q(0) + 4 * q(0.5) + q(1)) / 6.0;
      bx -= integral * n.x;
      by -= integral * n.y;
    }
    CHECK(sx == doctest::Approx(bx).epsilon(1e-12).scale(1.0));
    CHECK(sy == doctest::Approx(by).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("property: the degree-4 rule is exact for every right-hand side") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    testsupport::Gen g(seed);
    const Mesh m = g.jittered_rectangle(g.index(2, 8), g.index(2, 8));
    const P1Space space(m);
    std::vector<double> d;
    for (std::size_t i = 0; i < m.vertices.size(); ++i) d.push_back(g.uniform(0.5, 2.0));
    const auto depth = make_bathymetry(m, d);
    const State s = random_state(g, m.vertices.size());
    const auto a = eta_rhs(space, depth, s, dunavant_degree4());
    const auto b = eta_rhs(space, depth, s, dunavant_degree6());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-13);
    for (auto c : {Component::x, Component::y}) {
      const auto va = velocity_rhs(space, s, c, dunavant_degree4());
      const auto vb = velocity_rhs(space, s, c, dunavant_degree6());
      for (std::size_t i = 0; i < va.size(); ++i) CHECK(std::abs(va[i] - vb[i]) <= 1e-13);
    }
  }
}

TEST_CASE("quadrature rules integrate monomials exactly") {
  // int over the reference triangle of l1^a l2^b l3^c = 2 a! b! c! / (a+b+c+2)! times area.
  auto exact = [](int a, int b, int c) { return 2.0 * std::tgamma(a + 1) * std::tgamma(b + 1) * std::tgamma(c + 1) / std::tgamma(a + b + c + 3); };
  auto rule_sum = [](std::span<const QuadraturePoint> rule, int a, int b, int c) {
    double s = 0.0;
    for (const auto& q : rule) s += q.weight * std::pow(q.bary[0], a) * std::pow(q.bary[1], b) * std::pow(q.bary[2], c);
    return s;
  };
  for (int a = 0; a <= 6; ++a)
    for (int b = 0; a + b <= 6; ++b)
      for (int c = 0; a + b + c <= 6; ++c) {
        if (a + b + c <= 4) CHECK(rule_sum(dunavant_degree4(), a, b, c) == doctest::Approx(exact(a, b, c)).epsilon(1e-13));
        CHECK(rule_sum(dunavant_degree6(), a, b, c) == doctest::Approx(exact(a, b, c)).epsilon(1e-13));
      }
}

TEST_CASE("apply_dirichlet_rhs") {
  const Vector f{1.0, 2.0, 3.0};
  CHECK(apply_dirichlet_rhs({}, f, Field::eta) == f);
  DirichletSpec all{{0, 1, 2}, {}, {}};
  CHECK(apply_dirichlet_rhs(all, f, Field::eta) == Vector{0.0, 0.0, 0.0});
  CHECK(apply_dirichlet_rhs(all, f, Field::u) == f);
  DirichletSpec one{{}, {}, {1}};
  CHECK(apply_dirichlet_rhs(one, f, Field::v) == Vector{1.0, 0.0, 3.0});
}

TEST_CASE("dirichlet_from_labels picks nodes per field") {
  RectangleLabels sides;
  sides.top = labels::open_sea;
  const Mesh m = rectangle_mesh({0, 0}, {1, 1}, 3, 3, sides);
  const int shore[] = {1}, open[] = {2};
  const auto spec = dirichlet_from_labels(m, shore, open, {});
  CHECK(spec.eta_nodes.size() == 12 - 2);
  CHECK(spec.u_nodes.size() == 4);
  CHECK(spec.v_nodes.empty());
}

TEST_CASE("assembly and right-hand sides do not depend on the worker count") {
  testsupport::Gen g(8);
  const Mesh m = g.jittered_rectangle(60, 50);
  std::vector<double> d;
  for (std::size_t i = 0; i < m.vertices.size(); ++i) d.push_back(g.uniform(0.5, 2.0));
  const auto depth = make_bathymetry(m, d);
  const State s = random_state(g, m.vertices.size());
  auto compute = [&] {
    const P1Space space(m);
    const auto sys = build_system_matrices(space, depth, {}, {});
    return std::make_tuple(sys.a_eta, sys.a_u, eta_rhs(space, depth, s), velocity_rhs(space, s, Component::y));
  };
  ::setenv("BBMWAVE_THREADS", "1", 1);
  CHECK(worker_count() == 1);
  const auto one = compute();
  ::setenv("BBMWAVE_THREADS", "7", 1);
  CHECK(worker_count() == 7);
  const auto seven = compute();
  ::unsetenv("BBMWAVE_THREADS");
  CHECK(one == seven);
}

TEST_CASE("empty mesh is rejected") {
  const Mesh empty;
  CHECK_THROWS(P1Space(empty));
}
