#include "bbmwave/simulate.hpp"

namespace bbmwave {

double discrete_mass(const SparseMatrix& mass, std::span<const double> eta) {
  if (mass.cols() != eta.size()) throw SimulationError("discrete_mass: size mismatch");
  // 1^T M eta summed column-wise over the stored entries.
  const auto offsets = mass.row_offsets();
  const auto cols = mass.col_indices();
  const auto values = mass.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < mass.rows(); ++i) {
    double row = 0.0;
    for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) row += values[k] * eta[cols[k]];
    sum += row;
  }
  return sum;
}

GaugeSet::GaugeSet(const Mesh& mesh, std::vector<Point2> points) : mesh_(&mesh), points_(std::move(points)) {
  const PointLocator locator(mesh);
  locations_.reserve(points_.size());
  for (const auto& p : points_) {
    auto loc = locator.locate(p);
    // Rounded barycentric coordinates would blur a gauge sitting on a vertex.
    if (loc) {
      const auto c = mesh.corners(loc->triangle);
      for (int i = 0; i < 3; ++i)
        if (c[i] == p) {
          loc->barycentric = {0.0, 0.0, 0.0};
          loc->barycentric[i] = 1.0;
        }
    }
    locations_.push_back(loc);
  }
}

std::vector<std::size_t> GaugeSet::skipped() const {
  std::vector<std::size_t> out;
  for (std::size_t g = 0; g < locations_.size(); ++g)
    if (!locations_[g]) out.push_back(g);
  return out;
}

std::vector<std::optional<GaugeSample>> GaugeSet::sample(const State& state) const {
  std::vector<std::optional<GaugeSample>> out;
  out.reserve(locations_.size());
  for (const auto& loc : locations_) {
    if (!loc) {
      out.emplace_back();
      continue;
    }
    const auto& v = mesh_->triangles[loc->triangle].v;
    const auto& w = loc->barycentric;
    // A coordinate equal to 1 reproduces the nodal value exactly.
    auto interp = [&](const Vector& f) {
      for (int i = 0; i < 3; ++i)
        if (w[i] == 1.0) return f[v[i]];
      return w[0] * f[v[0]] + w[1] * f[v[1]] + w[2] * f[v[2]];
    };
    out.push_back(GaugeSample{state.t, interp(state.eta), interp(state.u), interp(state.v)});
  }
  return out;
}

std::vector<std::optional<GaugeSample>> probe_gauges(const Mesh& mesh, const State& state,
                                                     std::span<const Point2> points) {
  return GaugeSet(mesh, {points.begin(), points.end()}).sample(state);
}

}  // namespace bbmwave
