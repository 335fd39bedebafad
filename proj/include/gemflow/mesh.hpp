#pragma once

#include "gemflow/geometry.hpp"

namespace gemflow {

/// Oriented mesh edge. `left` is the cell that walks the edge v0→v1 in its
/// CCW boundary; `right` is the other cell, or -1 on the domain boundary.
struct Face {
  int v0 = -1, v1 = -1;
  int left = -1, right = -1;
  double length = 0.0;
  Vec2 midpoint{0, 0};
  Vec2 normal{0, 0}; // unit, points out of `left`
};

/// 2D polygonal mesh over an axis-aligned rectangular domain. Immutable after
/// construction; all derived quantities (areas, adjacency, bin index) are
/// precomputed so concurrent reads are safe.
struct PolyMesh {
  std::vector<Vec2> vertices;
  std::vector<std::vector<int>> cells; // CCW vertex indices per cell
  std::vector<Face> faces;
  std::vector<std::vector<int>> cell_faces; // face i of cell K joins vertex i to i+1
  std::vector<double> cell_area;
  std::vector<double> porosity;
  std::vector<Vec2> cell_centroid;
  std::vector<double> cell_diam;
  std::vector<bool> cell_is_convex;
  Vec2 dom_lo{0, 0}, dom_hi{1, 1};
  double domain_area = 0.0;
  bool porosity_from_file = false;
  BinIndex index;

  int n_cells() const { return static_cast<int>(cells.size()); }
  int n_faces() const { return static_cast<int>(faces.size()); }
  Polygon cell_polygon(int K) const;
  /// Porous volume |K|_φ = φ_K |K|.
  double porous_volume(int K) const { return porosity[K] * cell_area[K]; }
  double total_porous_volume() const;
  std::vector<int> cell_neighbors(int K) const;
  bool cell_on_boundary(int K) const;
  double domain_diameter() const { return (dom_hi - dom_lo).norm(); }
  /// Lower bound on the smallest cell in-radius (area/perimeter).
  double min_inradius() const;
  double phi_min() const;
  void set_uniform_porosity(double phi);
};

/// nx × ny axis-aligned rectangular cells tiling (0,Lx) × (0,Ly), cell (i,j)
/// at index j*nx + i.
PolyMesh build_cartesian(int nx, int ny, double Lx, double Ly, double phi);

/// Read a POLYMESH2D file (see README for the format). Porosity defaults to 1
/// when the file has no POROSITY section; `porosity_from_file` records which.
PolyMesh load_mesh(const std::string& path);

/// Write in POLYMESH2D format with full floating-point precision, so that
/// load_mesh(save_mesh(m)) reproduces m exactly.
void save_mesh(const PolyMesh& mesh, const std::string& path);

/// Cell regularity m_Kreg = diam(K)² / |K|; 2 on squares, growing with
/// aspect ratio and distortion.
double regularity(const PolyMesh& mesh, int K);

/// Number of interior points traced per edge, per cell, plus the denser rule
/// for well cells. Built from the cell regularity: max(1, ⌈log₂ m_Kreg⌉),
/// doubled to 2n+1 on irregular meshes when the volume adjustment is active,
/// and 4·n̄+1 on well cells (n̄ = mesh average).
struct TrackingPolicy {
  std::vector<int> points_per_edge;
  int well_points_per_edge = 5;

  int for_cell(int K, bool well_cell) const {
    return well_cell ? well_points_per_edge : points_per_edge[K];
  }

  static TrackingPolicy from_mesh(const PolyMesh& mesh, bool adjustment_on,
                                  int override_points = 0);
};

} // namespace gemflow
