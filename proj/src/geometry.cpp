// Polygon kernel: shoelace areas, Sutherland-Hodgman clipping with an
// ear-clipping fallback for non-convex inputs, overlap maps of a polygon
// against a mesh, and bin-grid point location.

#include "gemflow/geometry.hpp"
#include "gemflow/mesh.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

namespace gemflow {

namespace {

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

// Twice the signed area of triangle (a,b,c).
double orient(const Vec2& a, const Vec2& b, const Vec2& c) {
  return cross(b - a, c - a);
}

bool segments_cross(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  const double d1 = orient(c, d, a);
  const double d2 = orient(c, d, b);
  const double d3 = orient(a, b, c);
  const double d4 = orient(a, b, d);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
         ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

double dist_point_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

} // namespace

double Polygon::signed_area() const {
  const std::size_t n = v.size();
  if (n < 3) return 0.0;
  double a = 0.0;
  for (std::size_t j = 0, i = n - 1; j != n; i = j++) a += cross(v[i], v[j]);
  return 0.5 * a;
}

Vec2 Polygon::centroid() const {
  const std::size_t n = v.size();
  double a = 0.0;
  Vec2 c{0, 0};
  for (std::size_t j = 0, i = n - 1; j != n; i = j++) {
    const double w = cross(v[i], v[j]);
    a += w;
    c += w * (v[i] + v[j]);
  }
  if (std::abs(a) < 1e-300) {
    // Degenerate: fall back to the vertex mean.
    c.setZero();
    for (const auto& p : v) c += p;
    return c / static_cast<double>(n);
  }
  return c / (3.0 * a);
}

bool Polygon::convex() const {
  const std::size_t n = v.size();
  if (n < 4) return true;
  // Tolerate exactly-collinear vertices (traced edge points on a straight
  // characteristic) but no reflex turn.
  double scale = 0.0;
  for (std::size_t j = 0, i = n - 1; j != n; i = j++) scale = std::max(scale, (v[j] - v[i]).squaredNorm());
  const double tol = -1e-12 * scale;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = v[i];
    const Vec2& b = v[(i + 1) % n];
    const Vec2& c = v[(i + 2) % n];
    if (orient(a, b, c) < tol) return false;
  }
  return true;
}

std::array<Vec2, 2> Polygon::bbox() const {
  Vec2 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
  Vec2 hi = -lo;
  for (const auto& p : v) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return {lo, hi};
}

double Polygon::diameter() const {
  double d2 = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      d2 = std::max(d2, (v[i] - v[j]).squaredNorm());
  return std::sqrt(d2);
}

bool Polygon::self_intersects() const {
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = v[i];
    const Vec2& b = v[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue; // adjacent
      if (segments_cross(a, b, v[j], v[(j + 1) % n])) return true;
    }
  }
  return false;
}

double polygon_area(const Polygon& p) { return p.signed_area(); }

Polygon clip_convex(const Polygon& subject, const Polygon& clip) {
  Polygon out = subject;
  const std::size_t m = clip.v.size();
  for (std::size_t e2 = 0, e1 = m - 1; e2 != m; e1 = e2++) {
    const Vec2& ca = clip.v[e1];
    const Vec2& cb = clip.v[e2];
    if (out.v.empty()) break;
    std::vector<Vec2> in;
    in.swap(out.v);
    const std::size_t k = in.size();
    for (std::size_t j = 0, i = k - 1; j != k; i = j++) {
      const double si = orient(ca, cb, in[i]);
      const double sj = orient(ca, cb, in[j]);
      if (sj >= 0.0) {
        if (si < 0.0) {
          const double t = si / (si - sj);
          out.v.push_back(in[i] + t * (in[j] - in[i]));
        }
        out.v.push_back(in[j]);
      } else if (si >= 0.0) {
        const double t = si / (si - sj);
        out.v.push_back(in[i] + t * (in[j] - in[i]));
      }
    }
  }
  return out;
}

std::vector<Polygon> triangulate(const Polygon& p) {
  const std::size_t n = p.v.size();
  if (n < 3) return {};
  if (n == 3) return {p};
  if (p.self_intersects()) throw Error("triangulate: polygon is not simple (edges cross)");
  std::vector<Polygon> tris;
  std::vector<Vec2> ring = p.v;
  double scale = 0.0;
  for (std::size_t j = 0, i = n - 1; j != n; i = j++)
    scale = std::max(scale, (ring[j] - ring[i]).squaredNorm());
  const double area_eps = 1e-14 * scale;

  // Ear clipping. A valid ear is a convex corner containing no other ring
  // vertex; failure to find one means the ring is tangled.
  while (ring.size() > 3) {
    const std::size_t m = ring.size();
    bool clipped = false;
    for (std::size_t i = 0; i < m; ++i) {
      const Vec2& a = ring[(i + m - 1) % m];
      const Vec2& b = ring[i];
      const Vec2& c = ring[(i + 1) % m];
      const double ar = orient(a, b, c);
      if (ar < -area_eps) continue; // reflex corner
      if (ar <= area_eps) {
        // Collinear corner contributes no area; drop it.
        ring.erase(ring.begin() + static_cast<long>(i));
        clipped = true;
        break;
      }
      bool contains = false;
      for (std::size_t j = 0; j < m && !contains; ++j) {
        if (j == (i + m - 1) % m || j == i || j == (i + 1) % m) continue;
        const Vec2& q = ring[j];
        if (orient(a, b, q) >= -area_eps && orient(b, c, q) >= -area_eps &&
            orient(c, a, q) >= -area_eps)
          contains = true;
      }
      if (contains) continue;
      tris.push_back(Polygon({a, b, c}));
      ring.erase(ring.begin() + static_cast<long>(i));
      clipped = true;
      break;
    }
    if (!clipped) throw Error("triangulate: polygon is not simple (no ear found)");
  }
  if (ring.size() == 3) {
    Polygon last(std::move(ring));
    if (last.signed_area() > area_eps) tris.push_back(std::move(last));
  }
  return tris;
}

double intersection_area(const Polygon& p, const Polygon& q) {
  if (p.v.size() < 3 || q.v.size() < 3) return 0.0;
  const auto bp = p.bbox();
  const auto bq = q.bbox();
  if (bp[1].x() <= bq[0].x() || bq[1].x() <= bp[0].x() || bp[1].y() <= bq[0].y() ||
      bq[1].y() <= bp[0].y())
    return 0.0;
  const bool pc = p.convex();
  const bool qc = q.convex();
  if (qc && pc) return std::max(0.0, clip_convex(p, q).signed_area());
  if (qc) {
    double a = 0.0;
    for (const auto& t : triangulate(p)) a += std::max(0.0, clip_convex(t, q).signed_area());
    return a;
  }
  if (pc) return intersection_area(q, p);
  double a = 0.0;
  for (const auto& tq : triangulate(q)) a += intersection_area(p, tq);
  return a;
}

double OverlapMap::find(int cell) const {
  for (const auto& [k, a] : entries)
    if (k == cell) return a;
  return 0.0;
}

void OverlapMap::add(int cell, double area) {
  for (auto& [k, a] : entries) {
    if (k == cell) {
      a += area;
      total += area;
      return;
    }
  }
  auto it = std::lower_bound(entries.begin(), entries.end(), cell,
                             [](const auto& e, int c) { return e.first < c; });
  entries.insert(it, {cell, area});
  total += area;
}

void OverlapMap::remove_nonpositive() {
  entries.erase(std::remove_if(entries.begin(), entries.end(),
                               [](const auto& e) { return e.second <= 0.0; }),
                entries.end());
  total = 0.0;
  for (const auto& [k, a] : entries) total += a;
}

BinIndex::BinIndex(const Vec2& lo, const Vec2& hi, int nx, int ny)
    : lo_(lo), hi_(hi), nx_(nx), ny_(ny), bins_(static_cast<std::size_t>(nx) * ny) {}

int BinIndex::bin_x(double x) const {
  const double t = (x - lo_.x()) / (hi_.x() - lo_.x());
  return std::clamp(static_cast<int>(t * nx_), 0, nx_ - 1);
}

int BinIndex::bin_y(double y) const {
  const double t = (y - lo_.y()) / (hi_.y() - lo_.y());
  return std::clamp(static_cast<int>(t * ny_), 0, ny_ - 1);
}

void BinIndex::insert(int item, const Vec2& blo, const Vec2& bhi) {
  const int i0 = bin_x(blo.x()), i1 = bin_x(bhi.x());
  const int j0 = bin_y(blo.y()), j1 = bin_y(bhi.y());
  for (int j = j0; j <= j1; ++j)
    for (int i = i0; i <= i1; ++i) bins_[static_cast<std::size_t>(j) * nx_ + i].push_back(item);
}

std::vector<int> BinIndex::candidates(const Vec2& blo, const Vec2& bhi) const {
  std::vector<int> out;
  const int i0 = bin_x(blo.x()), i1 = bin_x(bhi.x());
  const int j0 = bin_y(blo.y()), j1 = bin_y(bhi.y());
  for (int j = j0; j <= j1; ++j)
    for (int i = i0; i <= i1; ++i) {
      const auto& b = bins_[static_cast<std::size_t>(j) * nx_ + i];
      out.insert(out.end(), b.begin(), b.end());
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

// Closure membership test with a boundary tolerance relative to the cell size.
bool point_in_cell(const Vec2& x, const PolyMesh& mesh, int K) {
  const auto& idx = mesh.cells[K];
  const std::size_t n = idx.size();
  const double eps = 1e-9 * mesh.cell_diam[K];
  if (mesh.cell_is_convex[K]) {
    for (std::size_t j = 0, i = n - 1; j != n; i = j++) {
      const Vec2& a = mesh.vertices[idx[i]];
      const Vec2& b = mesh.vertices[idx[j]];
      const double s = orient(a, b, x);
      if (s < 0.0 && dist_point_segment(x, a, b) > eps) return false;
    }
    return true;
  }
  // General cell: boundary proximity, then crossing parity.
  for (std::size_t j = 0, i = n - 1; j != n; i = j++) {
    if (dist_point_segment(x, mesh.vertices[idx[i]], mesh.vertices[idx[j]]) <= eps) return true;
  }
  bool inside = false;
  for (std::size_t j = 0, i = n - 1; j != n; i = j++) {
    const Vec2& a = mesh.vertices[idx[i]];
    const Vec2& b = mesh.vertices[idx[j]];
    if ((a.y() > x.y()) != (b.y() > x.y())) {
      const double xi = a.x() + (x.y() - a.y()) / (b.y() - a.y()) * (b.x() - a.x());
      if (x.x() < xi) inside = !inside;
    }
  }
  return inside;
}

} // namespace

bool cell_contains(const PolyMesh& mesh, int K, const Vec2& x) {
  return point_in_cell(x, mesh, K);
}

int try_locate_point(const Vec2& x, const PolyMesh& mesh) {
  const auto cand = mesh.index.candidates(x, x);
  for (int K : cand) // sorted ascending: first hit is the tie-break winner
    if (point_in_cell(x, mesh, K)) return K;
  return -1;
}

int locate_point(const Vec2& x, const PolyMesh& mesh) {
  const int K = try_locate_point(x, mesh);
  if (K < 0)
    throw Error("locate_point: (" + std::to_string(x.x()) + ", " + std::to_string(x.y()) +
                ") is outside the mesh");
  return K;
}

OverlapMap overlap_with_mesh(const Polygon& p, const PolyMesh& mesh) {
  const auto bb = p.bbox();
  const double esc = 1e-8 * mesh.domain_diameter();
  if (bb[0].x() < mesh.dom_lo.x() - esc || bb[0].y() < mesh.dom_lo.y() - esc ||
      bb[1].x() > mesh.dom_hi.x() + esc || bb[1].y() > mesh.dom_hi.y() + esc)
    throw Error("escaped-domain: polygon leaves the mesh domain (tracking failure?)");

  // Non-convex subjects are triangulated once and the pieces clipped cell by
  // cell; convex subjects are clipped directly.
  std::vector<Polygon> pieces;
  if (p.convex())
    pieces.push_back(p);
  else
    pieces = triangulate(p);

  OverlapMap out;
  const double parea = p.signed_area();
  for (int K : mesh.index.candidates(bb[0], bb[1])) {
    const Polygon cell = mesh.cell_polygon(K);
    double a = 0.0;
    if (mesh.cell_is_convex[K]) {
      for (const auto& piece : pieces) a += std::max(0.0, clip_convex(piece, cell).signed_area());
    } else {
      for (const auto& piece : pieces) a += intersection_area(piece, cell);
    }
    if (a > 0.0) out.add(K, a);
  }

  // Fold slivers into the largest entry; keeps the partition total intact.
  if (!out.entries.empty()) {
    const double sliver = 1e-12 * std::abs(parea);
    double dropped = 0.0;
    std::size_t largest = 0;
    for (std::size_t i = 1; i < out.entries.size(); ++i)
      if (out.entries[i].second > out.entries[largest].second) largest = i;
    const int keep_cell = out.entries[largest].first;
    for (auto& [k, a] : out.entries) {
      if (k != keep_cell && a < sliver) {
        dropped += a;
        a = 0.0;
      }
    }
    if (dropped > 0.0) {
      out.remove_nonpositive();
      out.add(keep_cell, dropped);
    }
  }
  return out;
}

} // namespace gemflow
