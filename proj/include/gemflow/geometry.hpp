#pragma once

#include "gemflow/common.hpp"

#include <array>
#include <utility>

namespace gemflow {

struct PolyMesh;

/// Simple polygon, vertices in counter-clockwise order.
struct Polygon {
  std::vector<Vec2> v;

  Polygon() = default;
  explicit Polygon(std::vector<Vec2> pts) : v(std::move(pts)) {}

  std::size_t size() const { return v.size(); }

  /// Signed shoelace area; positive for counter-clockwise orientation.
  double signed_area() const;
  Vec2 centroid() const;
  bool convex() const;
  /// {lower-left, upper-right} of the axis-aligned bounding box.
  std::array<Vec2, 2> bbox() const;
  double diameter() const;
  /// True if some pair of non-adjacent edges crosses.
  bool self_intersects() const;
};

/// Shoelace area of a simple CCW polygon (positive).
double polygon_area(const Polygon& p);

/// Area of p ∩ q for simple polygons. Non-convex inputs are triangulated
/// (ear clipping) and clipped piecewise; convex pairs go straight through
/// Sutherland–Hodgman. Returns 0 for empty intersections.
double intersection_area(const Polygon& p, const Polygon& q);

/// Sutherland–Hodgman clip of `subject` against a convex CCW `clip` window.
Polygon clip_convex(const Polygon& subject, const Polygon& clip);

/// Fan/ear triangulation of a simple polygon. Throws Error if the polygon is
/// not simple (no ear can be found).
std::vector<Polygon> triangulate(const Polygon& p);

/// Sparse {cell → area} association for a polygon laid over a mesh.
struct OverlapMap {
  std::vector<std::pair<int, double>> entries; // sorted by cell index
  double total = 0.0;

  double find(int cell) const;
  void add(int cell, double area);
  void remove_nonpositive();
};

/// Uniform background bin grid over an axis-aligned box; stores which items
/// (by index) may intersect each bin. Used for candidate lookup of mesh cells.
class BinIndex {
public:
  BinIndex() = default;
  BinIndex(const Vec2& lo, const Vec2& hi, int nx, int ny);

  void insert(int item, const Vec2& bbox_lo, const Vec2& bbox_hi);
  /// Indices of all items whose bins intersect the query box, sorted, unique.
  std::vector<int> candidates(const Vec2& lo, const Vec2& hi) const;

private:
  Vec2 lo_{0, 0}, hi_{1, 1};
  int nx_ = 1, ny_ = 1;
  std::vector<std::vector<int>> bins_;

  int bin_x(double x) const;
  int bin_y(double y) const;
};

/// Cell areas of p ∩ K over all mesh cells K near p. Entries partition the
/// polygon's area: Σ entries = area(p) within 1e-9 relative for p ⊂ closure(Ω).
/// Slivers below 1e-12·area(p) are folded into the largest entry.
/// Throws Error("escaped-domain ...") if p leaves Ω by more than
/// 1e-8·diam(Ω).
OverlapMap overlap_with_mesh(const Polygon& p, const PolyMesh& mesh);

/// Whether x lies in the closure of cell K, with a boundary tolerance
/// relative to the cell size.
bool cell_contains(const PolyMesh& mesh, int K, const Vec2& x);

/// Index of a cell whose closure contains x; lowest index wins on shared
/// edges/vertices. Throws Error if x is outside the mesh.
int locate_point(const Vec2& x, const PolyMesh& mesh);

/// Like locate_point but returns -1 instead of throwing.
int try_locate_point(const Vec2& x, const PolyMesh& mesh);

} // namespace gemflow
