#include <algorithm>
#include <cmath>
#include <string>

#include "bbmwave/meshgen.hpp"
#include "cdt.hpp"

namespace bbmwave {

Mesh triangulate_pslg(const PSLG& pslg, const MeshgenParams& params) {
  params.validate();
  check_pslg(pslg);
  detail::RefiningTriangulation cdt(pslg, params);
  cdt.build();
  cdt.refine();
  Mesh mesh = cdt.extract();
  const auto violations = validate(mesh);
  if (!violations.empty())
    throw MeshgenError("triangulate_pslg: produced an invalid mesh: " + violations.front().message);
  return mesh;
}

Mesh generate_mesh(const LevelGrid& level, const MeshgenParams& params, OpenSeaRule open_sea, MeshgenReport* report) {
  params.validate();
  const auto contours = marching_squares(level, 0.0);
  const double eps = params.simplify_eps < 0.0 ? 0.5 * level.cell_size() : params.simplify_eps;

  std::vector<Polyline> curves;
  curves.reserve(contours.size());
  for (const auto& c : contours) {
    Polyline p = smooth_polyline(c, params.smooth_iters, params.smooth_lambda);
    p = simplify_polyline(p, eps);
    if (p.points.size() < (p.closed ? 3u : 2u)) continue;
    curves.push_back(std::move(p));
  }

  const double dx = (level.xs.back() - level.xs.front()) / static_cast<double>(level.xs.size() - 1);
  const double dy = (level.ys.back() - level.ys.front()) / static_cast<double>(level.ys.size() - 1);
  PslgOptions options;
  options.open_sea = open_sea;
  options.min_component_area = params.min_component_cells * dx * dy;
  const PSLG pslg = build_pslg(curves, level, options);
  Mesh mesh = triangulate_pslg(pslg, params);

  if (report) {
    report->contours = contours.size();
    report->pslg_points = pslg.points.size();
    report->pslg_segments = pslg.segments.size();
    report->min_angle_deg = mesh_min_angle(mesh);
    report->wet_area = total_area(mesh);
    report->shoreline_edges = 0;
    report->open_sea_edges = 0;
    for (const auto& e : mesh.boundary_edges) {
      if (e.label == labels::shoreline) ++report->shoreline_edges;
      if (e.label == labels::open_sea) ++report->open_sea_edges;
    }
  }
  return mesh;
}

double mesh_min_angle(const Mesh& mesh) {
  double worst = 180.0;
  for (const auto& t : mesh.triangles)
    worst = std::min(worst, min_angle_deg(mesh.point(t.v[0]), mesh.point(t.v[1]), mesh.point(t.v[2])));
  return worst;
}

}  // namespace bbmwave
