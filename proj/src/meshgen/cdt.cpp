#include "cdt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace bbmwave::detail {

namespace {
constexpr int next3(int i) { return (i + 1) % 3; }
constexpr int prev3(int i) { return (i + 2) % 3; }
}  // namespace

std::uint64_t RefiningTriangulation::key(std::size_t a, std::size_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
}

RefiningTriangulation::RefiningTriangulation(const PSLG& pslg, const MeshgenParams& params)
    : pslg_(pslg), params_(params) {
  if (pslg.points.empty()) throw MeshgenError("triangulate_pslg: empty PSLG");
  Point2 lo = pslg.points.front(), hi = lo;
  for (const auto& p : pslg.points) {
    if (!is_finite(p)) throw MeshgenError("triangulate_pslg: non-finite PSLG point");
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
  }
  const Point2 c{0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y)};
  const double m = std::max({hi.x - lo.x, hi.y - lo.y, 1e-300});
  min_length_ = 1e-12 * m;
  add_vertex({c.x - 20.0 * m, c.y - 10.0 * m});
  add_vertex({c.x + 20.0 * m, c.y - 10.0 * m});
  add_vertex({c.x, c.y + 20.0 * m});
  for (std::size_t v = 0; v < 3; ++v) verts_[v].input = true;
  const auto t = new_tri();
  tris_[t].v = {0, 1, 2};
  for (std::size_t v = 0; v < 3; ++v) vtri_[v] = t;
}

int RefiningTriangulation::local_index(std::size_t t, std::size_t v) const {
  const auto& tv = tris_[t].v;
  for (int i = 0; i < 3; ++i)
    if (tv[i] == v) return i;
  return -1;
}

void RefiningTriangulation::set_neighbor(std::size_t t, std::size_t old_nbr, std::size_t new_nbr) {
  if (t == kNone) return;
  for (auto& n : tris_[t].n) {
    if (n == old_nbr) {
      n = new_nbr;
      return;
    }
  }
}

std::size_t RefiningTriangulation::add_vertex(Point2 p) {
  verts_.push_back({p, false, kNone});
  vtri_.push_back(kNone);
  check_budget();
  return verts_.size() - 1;
}

std::size_t RefiningTriangulation::new_tri() {
  tris_.emplace_back();
  return tris_.size() - 1;
}

void RefiningTriangulation::check_budget() const {
  if (verts_.size() > params_.max_elements || tris_.size() > params_.max_elements)
    throw MeshgenError("triangulate_pslg: refinement exceeded the element budget of " +
                       std::to_string(params_.max_elements));
}

RefiningTriangulation::Loc RefiningTriangulation::locate(Point2 p, std::size_t start, bool stop_at_constraints) const {
  std::size_t t = start < tris_.size() ? start : 0;
  const auto& s = tris_[t].v;
  const Point2 origin{(pt(s[0]).x + pt(s[1]).x + pt(s[2]).x) / 3.0, (pt(s[0]).y + pt(s[1]).y + pt(s[2]).y) / 3.0};
  const std::size_t max_steps = 4 * tris_.size() + 16;
  for (std::size_t step = 0; step < max_steps; ++step) {
    const Tri& tri = tris_[t];
    int o[3];
    for (int k = 0; k < 3; ++k) o[k] = orient2d(pt(tri.v[next3(k)]), pt(tri.v[prev3(k)]), p);
    int exit = -1;
    for (int k = 0; k < 3; ++k) {
      if (o[k] >= 0) continue;
      if (exit < 0) exit = k;
      const Point2 a = pt(tri.v[next3(k)]), b = pt(tri.v[prev3(k)]);
      if (orient2d(origin, p, a) * orient2d(origin, p, b) <= 0) {
        exit = k;
        break;
      }
    }
    if (exit < 0) {
      int zeros = 0, zero_k = -1, nonzero_k = -1;
      for (int k = 0; k < 3; ++k) {
        if (o[k] == 0) {
          ++zeros;
          zero_k = k;
        } else {
          nonzero_k = k;
        }
      }
      if (zeros >= 2) return {LocKind::on_vertex, t, nonzero_k};
      if (zeros == 1) return {LocKind::on_edge, t, zero_k};
      return {LocKind::inside, t, -1};
    }
    if (stop_at_constraints && tri.fixed[exit]) return {LocKind::blocked, t, exit};
    if (tri.n[exit] == kNone) return {LocKind::outside, t, exit};
    t = tri.n[exit];
  }
  throw MeshgenError("triangulate_pslg: point location did not terminate");
}

std::size_t RefiningTriangulation::insert_point(Point2 p, std::size_t hint) {
  const Loc loc = locate(p, hint, false);
  switch (loc.kind) {
    case LocKind::on_vertex:
      return tris_[loc.tri].v[loc.local];
    case LocKind::on_edge:
      if (tris_[loc.tri].fixed[loc.local]) throw MeshgenError("triangulate_pslg: PSLG segments intersect");
      return split_edge(loc.tri, loc.local, p);
    case LocKind::inside:
      return insert_in_triangle(loc.tri, p);
    default:
      throw MeshgenError("triangulate_pslg: point outside the enclosing triangle");
  }
}

std::size_t RefiningTriangulation::insert_in_triangle(std::size_t t, Point2 p) {
  const std::size_t v = add_vertex(p);
  const Tri old = tris_[t];
  const std::size_t a = old.v[0], b = old.v[1], c = old.v[2];
  const std::size_t t0 = t, t1 = new_tri(), t2 = new_tri();

  Tri n0, n1, n2;
  n0.v = {a, b, v};
  n0.n = {t1, t2, old.n[2]};
  n0.fixed = {false, false, old.fixed[2]};
  n1.v = {b, c, v};
  n1.n = {t2, t0, old.n[0]};
  n1.fixed = {false, false, old.fixed[0]};
  n2.v = {c, a, v};
  n2.n = {t0, t1, old.n[1]};
  n2.fixed = {false, false, old.fixed[1]};
  n0.interior = n1.interior = n2.interior = old.interior;
  tris_[t0] = n0;
  tris_[t1] = n1;
  tris_[t2] = n2;
  set_neighbor(old.n[0], t, t1);
  set_neighbor(old.n[1], t, t2);

  vtri_[a] = t0;
  vtri_[b] = t1;
  vtri_[c] = t2;
  vtri_[v] = t0;
  touched_.insert(touched_.end(), {t0, t1, t2});
  last_ = t0;
  legalize({{t0, v}, {t1, v}, {t2, v}}, v);
  return v;
}

std::size_t RefiningTriangulation::split_edge(std::size_t t, int k, Point2 p) {
  const Tri told = tris_[t];
  const std::size_t c = told.v[k], a = told.v[next3(k)], b = told.v[prev3(k)];
  const std::size_t u = told.n[k];
  if (u == kNone) throw MeshgenError("triangulate_pslg: cannot split an edge of the enclosing triangle");
  const Tri uold = tris_[u];
  int j = -1;
  for (int i = 0; i < 3; ++i)
    if (uold.n[i] == t) j = i;
  const std::size_t d = uold.v[j];

  const bool fixed = told.fixed[k];
  SegmentInfo info;
  if (fixed) {
    info = segs_.at(key(a, b));
    segs_.erase(key(a, b));
  }
  const std::size_t v = add_vertex(p);
  if (fixed) {
    verts_[v].segment = info.parent;
    segs_[key(a, v)] = info;
    segs_[key(v, b)] = info;
  }

  const std::size_t t0 = t, t1 = new_tri(), u0 = u, u1 = new_tri();
  Tri nt0, nt1, nu0, nu1;
  nt0.v = {a, v, c};
  nt0.n = {t1, told.n[prev3(k)], u1};
  nt0.fixed = {false, told.fixed[prev3(k)], fixed};
  nt1.v = {v, b, c};
  nt1.n = {told.n[next3(k)], t0, u0};
  nt1.fixed = {told.fixed[next3(k)], false, fixed};
  nu0.v = {b, v, d};
  nu0.n = {u1, uold.n[prev3(j)], t1};
  nu0.fixed = {false, uold.fixed[prev3(j)], fixed};
  nu1.v = {v, a, d};
  nu1.n = {uold.n[next3(j)], u0, t0};
  nu1.fixed = {uold.fixed[next3(j)], false, fixed};
  nt0.interior = nt1.interior = told.interior;
  nu0.interior = nu1.interior = uold.interior;
  tris_[t0] = nt0;
  tris_[t1] = nt1;
  tris_[u0] = nu0;
  tris_[u1] = nu1;
  set_neighbor(told.n[next3(k)], t, t1);
  set_neighbor(uold.n[next3(j)], u, u1);

  vtri_[a] = t0;
  vtri_[b] = t1;
  vtri_[c] = t0;
  vtri_[d] = u0;
  vtri_[v] = t0;
  touched_.insert(touched_.end(), {t0, t1, u0, u1});
  last_ = t0;
  legalize({{t0, v}, {t1, v}, {u0, v}, {u1, v}}, v);
  return v;
}

void RefiningTriangulation::legalize(std::vector<std::pair<std::size_t, std::size_t>> stack, std::size_t p) {
  while (!stack.empty()) {
    const auto [t, pv] = stack.back();
    stack.pop_back();
    const int k = local_index(t, pv);
    if (k < 0) continue;
    const Tri& tri = tris_[t];
    if (tri.fixed[k]) continue;
    const std::size_t u = tri.n[k];
    if (u == kNone) continue;
    const Tri& ut = tris_[u];
    int j = -1;
    for (int i = 0; i < 3; ++i)
      if (ut.n[i] == t) j = i;
    const std::size_t q = ut.v[j];
    if (incircle(pt(tri.v[0]), pt(tri.v[1]), pt(tri.v[2]), pt(q)) > 0) {
      flip(t, k);
      stack.push_back({t, p});
      stack.push_back({u, p});
    }
  }
}

void RefiningTriangulation::flip(std::size_t t, int k) {
  const Tri told = tris_[t];
  const std::size_t u = told.n[k];
  const Tri uold = tris_[u];
  const std::size_t p = told.v[k], a = told.v[next3(k)], b = told.v[prev3(k)];
  int j = -1;
  for (int i = 0; i < 3; ++i)
    if (uold.n[i] == t) j = i;
  const std::size_t q = uold.v[j];

  const std::size_t x1 = told.n[next3(k)], x2 = told.n[prev3(k)];
  const bool fx1 = told.fixed[next3(k)], fx2 = told.fixed[prev3(k)];
  const std::size_t y1 = uold.n[next3(j)], y2 = uold.n[prev3(j)];
  const bool fy1 = uold.fixed[next3(j)], fy2 = uold.fixed[prev3(j)];

  Tri nt, nu;
  nt.v = {p, a, q};
  nt.n = {y1, u, x2};
  nt.fixed = {fy1, false, fx2};
  nu.v = {p, q, b};
  nu.n = {y2, x1, t};
  nu.fixed = {fy2, fx1, false};
  nt.interior = told.interior;
  nu.interior = uold.interior;
  tris_[t] = nt;
  tris_[u] = nu;
  set_neighbor(y1, u, t);
  set_neighbor(x1, t, u);

  vtri_[p] = t;
  vtri_[a] = t;
  vtri_[q] = t;
  vtri_[b] = u;
  touched_.insert(touched_.end(), {t, u});
}

std::pair<std::size_t, int> RefiningTriangulation::find_edge(std::size_t a, std::size_t b) const {
  const std::size_t start = vtri_[a];
  std::size_t t = start;
  for (std::size_t guard = 0; guard < tris_.size() + 1; ++guard) {
    const int i = local_index(t, a);
    const auto& tri = tris_[t];
    if (tri.v[next3(i)] == b) return {t, prev3(i)};
    if (tri.v[prev3(i)] == b) return {t, next3(i)};
    const std::size_t next = tri.n[prev3(i)];
    if (next == kNone || next == start) break;
    t = next;
  }
  return {kNone, -1};
}

void RefiningTriangulation::mark_fixed(std::size_t a, std::size_t b, const SegmentInfo& info) {
  const auto [t, k] = find_edge(a, b);
  tris_[t].fixed[k] = true;
  const std::size_t u = tris_[t].n[k];
  if (u != kNone) {
    for (int i = 0; i < 3; ++i)
      if (tris_[u].n[i] == t) tris_[u].fixed[i] = true;
  }
  segs_[key(a, b)] = info;
}

Point2 RefiningTriangulation::split_point(std::size_t a, std::size_t b) const {
  const Point2 pa = pt(a), pb = pt(b);
  const bool ia = verts_[a].input, ib = verts_[b].input;
  if (ia == ib) return {0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y)};
  // Concentric shells: split at a power-of-two distance from the input vertex.
  const Point2 apex = ia ? pa : pb;
  const Point2 other = ia ? pb : pa;
  const double len = distance(apex, other);
  const double d = std::exp2(std::round(std::log2(0.5 * len)));
  const double t = d / len;
  return apex + t * (other - apex);
}

void RefiningTriangulation::recover_segment(std::size_t a0, std::size_t b0, const SegmentInfo& info) {
  std::vector<std::pair<std::size_t, std::size_t>> stack{{a0, b0}};
  while (!stack.empty()) {
    const auto [a, b] = stack.back();
    stack.pop_back();
    if (find_edge(a, b).first != kNone) {
      mark_fixed(a, b, info);
      continue;
    }
    if (distance(pt(a), pt(b)) < min_length_) throw MeshgenError("triangulate_pslg: segment recovery failed");
    const std::size_t before = verts_.size();
    const std::size_t m = insert_point(split_point(a, b), vtri_[a]);
    if (m < before) throw MeshgenError("triangulate_pslg: a PSLG point lies on a segment");
    verts_[m].segment = info.parent;
    stack.push_back({m, b});
    stack.push_back({a, m});
  }
}

std::size_t RefiningTriangulation::split_subsegment(std::size_t a, std::size_t b) {
  if (distance(pt(a), pt(b)) < min_length_)
    throw MeshgenError("triangulate_pslg: refinement failed, subsegment too short");
  const auto [t, k] = find_edge(a, b);
  return split_edge(t, k, split_point(a, b));
}

void RefiningTriangulation::build() {
  input_vertex_.resize(pslg_.points.size());
  for (std::size_t i = 0; i < pslg_.points.size(); ++i) {
    const std::size_t before = verts_.size();
    const std::size_t v = insert_point(pslg_.points[i], last_);
    if (v < before) throw MeshgenError("triangulate_pslg: duplicate PSLG point " + std::to_string(i));
    verts_[v].input = true;
    input_vertex_[i] = v;
  }
  input_segments_at_.assign(verts_.size(), {});
  for (std::size_t s = 0; s < pslg_.segments.size(); ++s) {
    const auto& seg = pslg_.segments[s];
    input_segments_at_[input_vertex_[seg.a]].push_back(s);
    input_segments_at_[input_vertex_[seg.b]].push_back(s);
  }
  for (std::size_t s = 0; s < pslg_.segments.size(); ++s) {
    const auto& seg = pslg_.segments[s];
    recover_segment(input_vertex_[seg.a], input_vertex_[seg.b], {seg.label, s});
  }
  touched_.clear();
  classify();
}

void RefiningTriangulation::classify() {
  std::vector<int> side(tris_.size(), -1);
  std::deque<std::size_t> queue{vtri_[0]};
  side[vtri_[0]] = 0;
  while (!queue.empty()) {
    const std::size_t t = queue.front();
    queue.pop_front();
    for (int k = 0; k < 3; ++k) {
      const std::size_t u = tris_[t].n[k];
      if (u == kNone) continue;
      const int s = tris_[t].fixed[k] ? 1 - side[t] : side[t];
      if (side[u] < 0) {
        side[u] = s;
        queue.push_back(u);
      } else if (side[u] != s) {
        throw MeshgenError("triangulate_pslg: PSLG does not enclose a region consistently");
      }
    }
  }
  bool any = false;
  for (std::size_t t = 0; t < tris_.size(); ++t) {
    tris_[t].interior = side[t] == 1;
    any = any || tris_[t].interior;
  }
  if (!any) throw MeshgenError("triangulate_pslg: PSLG does not enclose a region");
}

bool RefiningTriangulation::encroached(std::size_t a, std::size_t b) const {
  const auto [t, k] = find_edge(a, b);
  if (t == kNone) return false;
  const Point2 pa = pt(a), pb = pt(b);
  auto check = [&](std::size_t tri, std::size_t apex) {
    if (!tris_[tri].interior) return false;
    const Point2 c = pt(apex);
    return dot(pa - c, pb - c) < 0.0;
  };
  if (check(t, tris_[t].v[k])) return true;
  const std::size_t u = tris_[t].n[k];
  if (u == kNone) return false;
  for (int i = 0; i < 3; ++i)
    if (tris_[u].n[i] == t) return check(u, tris_[u].v[i]);
  return false;
}

bool RefiningTriangulation::exempt_small_angle(std::size_t t) const {
  const Tri& tri = tris_[t];
  // Vertex with the smallest angle sits opposite the shortest edge.
  int r = 0;
  double shortest = INFINITY;
  for (int i = 0; i < 3; ++i) {
    const double len = distance(pt(tri.v[next3(i)]), pt(tri.v[prev3(i)]));
    if (len < shortest) {
      shortest = len;
      r = i;
    }
  }
  // Angle enclosed by two constrained edges.
  if (tri.fixed[next3(r)] && tri.fixed[prev3(r)]) return true;

  // Shortest edge spans two segments that meet at a sharp input corner at
  // equal distance from it: splitting there would not terminate.
  const std::size_t p = tri.v[next3(r)], q = tri.v[prev3(r)];
  const std::size_t sp = verts_[p].segment, sq = verts_[q].segment;
  if (sp == kNone || sq == kNone || sp == sq) return false;
  const auto& s1 = pslg_.segments[sp];
  const auto& s2 = pslg_.segments[sq];
  std::size_t apex = kNone;
  for (auto e1 : {s1.a, s1.b})
    for (auto e2 : {s2.a, s2.b})
      if (e1 == e2) apex = e1;
  if (apex == kNone) return false;
  const Point2 z = pslg_.points[apex];
  const Point2 o1 = pslg_.points[s1.a == apex ? s1.b : s1.a];
  const Point2 o2 = pslg_.points[s2.a == apex ? s2.b : s2.a];
  const Vec2 d1 = o1 - z, d2 = o2 - z;
  const double angle = std::atan2(std::abs(cross(d1, d2)), dot(d1, d2)) * 180.0 / std::numbers::pi;
  if (angle >= 60.0) return false;
  const double rp = distance(pt(p), z), rq = distance(pt(q), z);
  return std::abs(rp - rq) <= 1e-3 * std::max(rp, rq);
}

bool RefiningTriangulation::is_bad(std::size_t t) const {
  const Tri& tri = tris_[t];
  if (!tri.interior) return false;
  const Point2 a = pt(tri.v[0]), b = pt(tri.v[1]), c = pt(tri.v[2]);
  if (0.5 * signed_area2(a, b, c) > params_.max_area) return true;
  if (min_angle_deg(a, b, c) < params_.min_angle_deg) return !exempt_small_angle(t);
  return false;
}

void RefiningTriangulation::queue_after_change() {
  std::sort(touched_.begin(), touched_.end());
  touched_.erase(std::unique(touched_.begin(), touched_.end()), touched_.end());
  for (const auto t : touched_) {
    const Tri& tri = tris_[t];
    for (int k = 0; k < 3; ++k) {
      if (!tri.fixed[k]) continue;
      const std::size_t a = tri.v[next3(k)], b = tri.v[prev3(k)];
      if (encroached(a, b)) seg_queue_.push_back({a, b});
    }
    if (is_bad(t)) tri_queue_.push_back({t, tri.v});
  }
  touched_.clear();
}

void RefiningTriangulation::refine() {
  for (std::size_t t = 0; t < tris_.size(); ++t) touched_.push_back(t);
  queue_after_change();

  // Segments queued with force are split even if no vertex encroaches them
  // (blocked or encroaching circumcenters).
  std::deque<std::pair<std::size_t, std::size_t>> forced;
  std::vector<std::size_t> cavity;
  std::vector<int> in_cavity(tris_.size(), 0);
  int stamp = 0;

  while (true) {
    if (!forced.empty() || !seg_queue_.empty()) {
      const bool force = !forced.empty();
      auto& queue = force ? forced : seg_queue_;
      const auto [a, b] = queue.front();
      queue.pop_front();
      if (!is_fixed(a, b)) continue;
      if (!force && !encroached(a, b)) continue;
      split_subsegment(a, b);
      queue_after_change();
      continue;
    }
    if (tri_queue_.empty()) break;

    const auto [t, verts] = tri_queue_.front();
    tri_queue_.pop_front();
    if (tris_[t].v != verts || !is_bad(t)) continue;
    const Point2 c = circumcenter(pt(verts[0]), pt(verts[1]), pt(verts[2]));
    if (!is_finite(c)) continue;

    const Loc loc = locate(c, t, true);
    if (loc.kind == LocKind::blocked) {
      const auto& bt = tris_[loc.tri];
      forced.push_back({bt.v[next3(loc.local)], bt.v[prev3(loc.local)]});
      tri_queue_.push_back({t, verts});
      continue;
    }
    if (loc.kind == LocKind::on_vertex || loc.kind == LocKind::outside) continue;

    // Cavity of the circumcenter; constrained edges on it must not be encroached.
    if (in_cavity.size() < tris_.size()) in_cavity.resize(tris_.size(), 0);
    ++stamp;
    cavity.assign(1, loc.tri);
    in_cavity[loc.tri] = stamp;
    std::vector<std::pair<std::size_t, std::size_t>> hit;
    for (std::size_t i = 0; i < cavity.size(); ++i) {
      const Tri& ct = tris_[cavity[i]];
      for (int k = 0; k < 3; ++k) {
        const std::size_t a = ct.v[next3(k)], b = ct.v[prev3(k)];
        if (ct.fixed[k]) {
          if (dot(pt(a) - c, pt(b) - c) < 0.0) hit.push_back({a, b});
          continue;
        }
        const std::size_t u = ct.n[k];
        if (u == kNone || in_cavity[u] == stamp) continue;
        const Tri& ut = tris_[u];
        if (incircle(pt(ut.v[0]), pt(ut.v[1]), pt(ut.v[2]), c) > 0) {
          in_cavity[u] = stamp;
          cavity.push_back(u);
        }
      }
    }
    if (!hit.empty()) {
      for (const auto& e : hit) forced.push_back(e);
      tri_queue_.push_back({t, verts});
      continue;
    }

    if (loc.kind == LocKind::on_edge) {
      split_edge(loc.tri, loc.local, c);
    } else {
      insert_in_triangle(loc.tri, c);
    }
    queue_after_change();
  }
}

Mesh RefiningTriangulation::extract() const {
  Mesh mesh;
  std::vector<std::size_t> id(verts_.size(), kNone);
  for (const auto& tri : tris_) {
    if (!tri.interior) continue;
    for (auto v : tri.v) id[v] = 0;
  }
  for (std::size_t v = 0; v < verts_.size(); ++v) {
    if (id[v] == kNone) continue;
    id[v] = mesh.vertices.size();
    mesh.vertices.push_back({verts_[v].p, labels::interior});
  }
  for (const auto& tri : tris_) {
    if (!tri.interior) continue;
    mesh.triangles.push_back({{id[tri.v[0]], id[tri.v[1]], id[tri.v[2]]}, 0});
    for (int k = 0; k < 3; ++k) {
      if (!tri.fixed[k]) continue;
      const std::size_t u = tri.n[k];
      if (u != kNone && tris_[u].interior) continue;
      const std::size_t a = tri.v[next3(k)], b = tri.v[prev3(k)];
      const int label = segs_.at(key(a, b)).label;
      mesh.boundary_edges.push_back({{id[a], id[b]}, label});
      for (auto v : {id[a], id[b]}) {
        auto& l = mesh.vertices[v].label;
        if (l == labels::interior || label < l) l = label;
      }
    }
  }
  return mesh;
}

}  // namespace bbmwave::detail
