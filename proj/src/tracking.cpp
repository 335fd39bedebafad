// Characteristic tracking along dX/dt = u(X)/phi(X): RK4 point integration
// and cell-boundary tracing. Boundary samples are defined per mesh edge so
// two cells sharing an edge trace the exact same polyline, which is what
// makes the traced regions tile the domain.

#include "gemflow/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace gemflow {

namespace {

Vec2 clamp_to_box(const Vec2& x, const PolyMesh& mesh) {
  return Vec2(std::clamp(x.x(), mesh.dom_lo.x(), mesh.dom_hi.x()),
              std::clamp(x.y(), mesh.dom_lo.y(), mesh.dom_hi.y()));
}

// Characteristic velocity u/phi at x, evaluated from the containing cell.
Vec2 char_velocity(const Vec2& x, const FlowField& flow, const PolyMesh& mesh) {
  int K = try_locate_point(x, mesh);
  if (K < 0)
    throw Error("flow_point: lost point (" + std::to_string(x.x()) + ", " +
                std::to_string(x.y()) + ") during integration");
  K = flow.resolve_cell(x, K);
  const Vec2 u = flow.velocity(x, K);
  if (!u.allFinite())
    throw Error("flow_point: non-finite velocity at (" + std::to_string(x.x()) + ", " +
                std::to_string(x.y()) + ")");
  return u / mesh.porosity[K];
}

} // namespace

int substep_count(const PolyMesh& mesh, const FlowField& flow, double dt) {
  const double hmin = mesh.min_inradius();
  const double vmax = flow.max_speed();
  const double need = dt * vmax / (mesh.phi_min() * hmin);
  const int n = static_cast<int>(std::ceil(need - 1e-12));
  return std::max(8, n);
}

Vec2 flow_point(const Vec2& x0, const FlowField& flow, const PolyMesh& mesh, double dt,
                Direction dir, int substeps) {
  const double h = (dir == Direction::Backward ? -dt : dt) / substeps;
  Vec2 x = clamp_to_box(x0, mesh);
  for (int s = 0; s < substeps; ++s) {
    const Vec2 k1 = char_velocity(x, flow, mesh);
    const Vec2 k2 = char_velocity(clamp_to_box(x + 0.5 * h * k1, mesh), flow, mesh);
    const Vec2 k3 = char_velocity(clamp_to_box(x + 0.5 * h * k2, mesh), flow, mesh);
    const Vec2 k4 = char_velocity(clamp_to_box(x + h * k3, mesh), flow, mesh);
    x = clamp_to_box(x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4), mesh);
  }
  return x;
}

Vec2 flow_point(const Vec2& x, const FlowField& flow, const PolyMesh& mesh, double dt,
                Direction dir) {
  return flow_point(x, flow, mesh, dt, dir, substep_count(mesh, flow, dt));
}

std::vector<int> edge_sample_counts(const PolyMesh& mesh, const TrackingPolicy& policy,
                                    const Wells& wells) {
  std::unordered_set<int> well_cells;
  for (const auto& w : wells) well_cells.insert(w.cell);
  std::vector<int> counts(mesh.faces.size(), 1);
  for (std::size_t fi = 0; fi < mesh.faces.size(); ++fi) {
    const Face& f = mesh.faces[fi];
    int n = policy.for_cell(f.left, well_cells.count(f.left) > 0);
    if (f.right >= 0) n = std::max(n, policy.for_cell(f.right, well_cells.count(f.right) > 0));
    counts[fi] = n;
  }
  return counts;
}

double target_volume(const PolyMesh& mesh, const FlowField& flow, int K, double dt,
                     Direction dir) {
  const double alpha = flow.divergence(K) * dt / mesh.porosity[K];
  const double s = (dir == Direction::Backward) ? -alpha : alpha;
  return std::exp(s) * mesh.cell_area[K];
}

TracedRegion trace_cell(const PolyMesh& mesh, const FlowField& flow,
                        const std::vector<int>& counts, int K, double dt, Direction dir,
                        int substeps) {
  TracedRegion r;
  r.source_cell = K;
  r.direction = dir;

  const auto& idx = mesh.cells[K];
  const std::size_t nv = idx.size();

  // Boundary samples in order: vertex i, then the interior points of the edge
  // from vertex i to vertex i+1.
  struct Sample {
    Vec2 x;
    bool is_vertex;
    int face, face_prev;
  };
  std::vector<Sample> samples;
  for (std::size_t i = 0; i < nv; ++i) {
    const int f_prev = mesh.cell_faces[K][(i + nv - 1) % nv];
    const int f = mesh.cell_faces[K][i];
    samples.push_back({mesh.vertices[idx[i]], true, f, f_prev});
    const Vec2 a = mesh.vertices[idx[i]];
    const Vec2 b = mesh.vertices[idx[(i + 1) % nv]];
    const int n = counts[f];
    for (int j = 1; j <= n; ++j) {
      const double t = static_cast<double>(j) / (n + 1);
      samples.push_back({a + t * (b - a), false, f, f});
    }
  }

  const double btol = 1e-9 * mesh.domain_diameter();
  r.polygon.v.reserve(samples.size());
  r.tags.reserve(samples.size());
  for (const auto& s : samples) {
    const Vec2 y = flow_point(s.x, flow, mesh, dt, dir, substeps);
    PointTag tag;
    tag.pos = y;
    tag.residing = locate_point(y, mesh);
    tag.u = flow.velocity(y, flow.resolve_cell(y, tag.residing));
    tag.speed = tag.u.norm();
    tag.on_domain_boundary = y.x() < mesh.dom_lo.x() + btol || y.x() > mesh.dom_hi.x() - btol ||
                             y.y() < mesh.dom_lo.y() + btol || y.y() > mesh.dom_hi.y() - btol;
    tag.is_vertex = s.is_vertex;
    tag.face = s.face;
    tag.face_prev = s.face_prev;
    r.polygon.v.push_back(y);
    r.tags.push_back(tag);
  }

  if (r.polygon.signed_area() <= 0.0)
    throw Error("trace_cell: traced region of cell " + std::to_string(K) +
                " is inverted (time step too large for the flow)");
  if (r.polygon.self_intersects())
    throw Error("trace_cell: traced region of cell " + std::to_string(K) +
                " self-intersects (time step too large for the flow)");

  // Orientation of the local velocity relative to the traced region: outward
  // if it has a positive component along the boundary normal at the point.
  const std::size_t np = r.polygon.v.size();
  for (std::size_t i = 0; i < np; ++i) {
    const Vec2& prev = r.polygon.v[(i + np - 1) % np];
    const Vec2& cur = r.polygon.v[i];
    const Vec2& next = r.polygon.v[(i + 1) % np];
    Vec2 n1(cur.y() - prev.y(), prev.x() - cur.x());
    Vec2 n2(next.y() - cur.y(), cur.x() - next.x());
    if (n1.norm() > 0) n1.normalize();
    if (n2.norm() > 0) n2.normalize();
    const Vec2 nrm = n1 + n2;
    r.tags[i].outward = r.tags[i].u.dot(nrm) > 0.0;
  }

  r.overlaps = overlap_with_mesh(r.polygon, mesh);
  r.target = target_volume(mesh, flow, K, dt, dir);
  r.volume_error = r.overlaps.total - r.target;
  return r;
}

TracedRegion trace_cell(const PolyMesh& mesh, const FlowField& flow,
                        const TrackingPolicy& policy, const Wells& wells, int K, double dt,
                        Direction dir) {
  const auto counts = edge_sample_counts(mesh, policy, wells);
  return trace_cell(mesh, flow, counts, K, dt, dir, substep_count(mesh, flow, dt));
}

} // namespace gemflow
