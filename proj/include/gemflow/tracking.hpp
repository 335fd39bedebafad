// Characteristic tracking: integrate points along dX/dt = u(X)/phi(X) and
// trace whole cell boundaries backward or forward in time, producing traced
// regions with their overlap maps against the mesh.

#pragma once

#include "gemflow/geometry.hpp"
#include "gemflow/mesh.hpp"
#include "gemflow/velocity.hpp"

#include <vector>

namespace gemflow {

enum class Direction { Backward, Forward };

/// Bookkeeping for one traced boundary point, consumed by the volume
/// adjustment: where the point ended up, the local velocity there, and how
/// that velocity is oriented relative to the traced region.
struct PointTag {
  Vec2 pos{0.0, 0.0};  // traced position
  int residing = -1;   // cell containing pos
  Vec2 u{0.0, 0.0};    // velocity at pos
  double speed = 0.0;  // |u|
  bool outward = false;        // u points out of the traced polygon here
  bool on_domain_boundary = false;
  bool is_vertex = false;      // cell corner (shared by two edges)
  int face = -1;               // mesh face the sample lies on (next face for vertices)
  int face_prev = -1;          // for vertices, the preceding face; else == face
};

/// Image of one cell under the approximate characteristic flow.
struct TracedRegion {
  int source_cell = -1;
  Direction direction = Direction::Backward;
  Polygon polygon;      // traced boundary points in boundary order
  OverlapMap overlaps;  // unweighted areas |polygon ∩ M| per mesh cell M
  double target = 0.0;  // constant-divergence volume prediction
  double volume_error = 0.0;  // overlaps.total - target
  std::vector<PointTag> tags; // one per polygon vertex, same order

  /// Porous volume of the region: Σ_M φ_M |polygon ∩ M|.
  double porous_total(const PolyMesh& mesh) const {
    double s = 0.0;
    for (const auto& [M, a] : overlaps.entries) s += mesh.porosity[M] * a;
    return s;
  }
};

/// Number of RK4 substeps for the given step: max(8, ⌈dt·max|u|/(φ_*·h_min)⌉)
/// with h_min the smallest cell in-radius. Shared by every traced point so
/// that points sampled on a mesh edge trace identically from both sides.
int substep_count(const PolyMesh& mesh, const FlowField& flow, double dt);

/// Integrate one point over ±dt with classical RK4, evaluating the velocity
/// from the cell currently containing the point and dividing by that cell's
/// porosity. Stage and end points are projected back onto the domain box.
/// Throws on non-finite velocity or if the point cannot be located.
Vec2 flow_point(const Vec2& x, const FlowField& flow, const PolyMesh& mesh, double dt,
                Direction dir, int substeps);

/// Convenience overload computing the substep count internally.
Vec2 flow_point(const Vec2& x, const FlowField& flow, const PolyMesh& mesh, double dt,
                Direction dir);

/// Per-face boundary sample counts: the tracking policy count of each
/// adjacent cell (well cells use the denser well rule), maximised over the
/// two sides so neighbouring cells share identical edge samples.
std::vector<int> edge_sample_counts(const PolyMesh& mesh, const TrackingPolicy& policy,
                                    const Wells& wells);

/// Trace the boundary of cell K over ±dt: vertices plus `counts[face]`
/// uniformly spaced interior points per edge, in boundary order. Computes the
/// overlap map, the constant-divergence target volume, and per-point tags.
/// Throws if the traced polygon is degenerate or self-intersecting.
TracedRegion trace_cell(const PolyMesh& mesh, const FlowField& flow,
                        const std::vector<int>& counts, int K, double dt, Direction dir,
                        int substeps);

/// Convenience overload: builds edge counts from the policy and the substep
/// count from the flow.
TracedRegion trace_cell(const PolyMesh& mesh, const FlowField& flow,
                        const TrackingPolicy& policy, const Wells& wells, int K, double dt,
                        Direction dir);

/// Constant-divergence prediction of the traced volume of K over dt:
/// e^{-α}|K| backward and e^{+α}|K| forward, with α = div_K·dt/φ_K.
double target_volume(const PolyMesh& mesh, const FlowField& flow, int K, double dt,
                     Direction dir);

} // namespace gemflow
