// Polygon kernel tests: shoelace areas against closed forms, clipping against
// hand-computed overlaps and a Monte-Carlo area oracle, triangulation,
// overlap maps on meshes, and point location.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gemflow/geometry.hpp"
#include "gemflow/mesh.hpp"

#include <cmath>
#include <random>

using namespace gemflow;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Convex polygon from sorted angles on a rotated ellipse.
Polygon random_convex(std::mt19937& rng) {
  std::uniform_int_distribution<int> nd(3, 8);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  const int n = nd(rng);
  // Jittered uniform angles: strictly increasing with a guaranteed gap, so
  // the ellipse samples always form a convex CCW ring.
  std::vector<double> ang(n);
  for (int i = 0; i < n; ++i) ang[i] = 2.0 * kPi * (i + 0.8 * ud(rng)) / n;
  const double rx = 0.3 + 1.2 * ud(rng);
  const double ry = 0.3 + 1.2 * ud(rng);
  const double rot = 2.0 * kPi * ud(rng);
  const Vec2 c(2.0 * ud(rng) - 1.0, 2.0 * ud(rng) - 1.0);
  const double cs = std::cos(rot), sn = std::sin(rot);
  Polygon p;
  for (double a : ang) {
    const double ex = rx * std::cos(a), ey = ry * std::sin(a);
    p.v.emplace_back(c.x() + cs * ex - sn * ey, c.y() + sn * ex + cs * ey);
  }
  return p;
}

bool inside_convex(const Polygon& p, const Vec2& x) {
  const std::size_t n = p.v.size();
  for (std::size_t j = 0, i = n - 1; j != n; i = j++) {
    const Vec2 e = p.v[j] - p.v[i];
    if (e.x() * (x.y() - p.v[i].y()) - e.y() * (x.x() - p.v[i].x()) < 0.0) return false;
  }
  return true;
}

// Monte-Carlo intersection area over the overlap of the two bounding boxes.
// Returns {estimate, standard error}.
std::pair<double, double> mc_intersection(const Polygon& p, const Polygon& q, int n,
                                          std::mt19937& rng) {
  const auto bp = p.bbox();
  const auto bq = q.bbox();
  const Vec2 lo = bp[0].cwiseMax(bq[0]);
  const Vec2 hi = bp[1].cwiseMin(bq[1]);
  if (lo.x() >= hi.x() || lo.y() >= hi.y()) return {0.0, 0.0};
  const double box = (hi - lo).prod();
  std::uniform_real_distribution<double> ux(lo.x(), hi.x());
  std::uniform_real_distribution<double> uy(lo.y(), hi.y());
  long hits = 0;
  for (int i = 0; i < n; ++i) {
    const Vec2 x(ux(rng), uy(rng));
    if (inside_convex(p, x) && inside_convex(q, x)) ++hits;
  }
  const double ph = static_cast<double>(hits) / n;
  return {box * ph, box * std::sqrt(std::max(ph * (1.0 - ph), 1.0 / n) / n)};
}

Polygon unit_square(double x0 = 0.0, double y0 = 0.0, double s = 1.0) {
  return Polygon({{x0, y0}, {x0 + s, y0}, {x0 + s, y0 + s}, {x0, y0 + s}});
}

} // namespace

TEST_CASE("shoelace area matches closed forms") {
  CHECK(polygon_area(unit_square()) == doctest::Approx(1.0).epsilon(1e-14));
  const Polygon tri({{0, 0}, {4, 0}, {0, 3}});
  CHECK(polygon_area(tri) == doctest::Approx(6.0).epsilon(1e-14));
  // Regular hexagon with unit circumradius.
  Polygon hex;
  for (int k = 0; k < 6; ++k)
    hex.v.emplace_back(std::cos(kPi * k / 3.0), std::sin(kPi * k / 3.0));
  CHECK(polygon_area(hex) == doctest::Approx(2.598076211353316).epsilon(1e-13));
  // Clockwise ordering flips the sign.
  Polygon cw = unit_square();
  std::reverse(cw.v.begin(), cw.v.end());
  CHECK(polygon_area(cw) == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("centroid, bbox, diameter, convexity") {
  const Polygon sq = unit_square(2.0, 3.0, 2.0);
  CHECK(sq.centroid().x() == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(sq.centroid().y() == doctest::Approx(4.0).epsilon(1e-14));
  const auto bb = sq.bbox();
  CHECK(bb[0].x() == 2.0);
  CHECK(bb[1].y() == 5.0);
  CHECK(sq.diameter() == doctest::Approx(2.0 * std::sqrt(2.0)));
  CHECK(sq.convex());
  const Polygon ell({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}});
  CHECK_FALSE(ell.convex());
  CHECK(ell.signed_area() == doctest::Approx(3.0));
}

TEST_CASE("self intersection detection") {
  CHECK_FALSE(unit_square().self_intersects());
  const Polygon bowtie({{0, 0}, {1, 1}, {1, 0}, {0, 1}});
  CHECK(bowtie.self_intersects());
}

TEST_CASE("convex clipping on hand-checked cases") {
  const Polygon a = unit_square();
  const Polygon b = unit_square(0.5, 0.5);
  CHECK(clip_convex(a, b).signed_area() == doctest::Approx(0.25).epsilon(1e-13));
  CHECK(clip_convex(a, a).signed_area() == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(clip_convex(a, unit_square(2.0, 2.0)).signed_area() == doctest::Approx(0.0));
  // Triangle clipped by a square covering half of it.
  const Polygon tri({{0, 0}, {2, 0}, {0, 2}});
  const Polygon half({{0, 0}, {1, 0}, {1, 2}, {0, 2}});
  CHECK(clip_convex(tri, half).signed_area() == doctest::Approx(1.5).epsilon(1e-13));
}

TEST_CASE("intersection area is symmetric and handles non-convex inputs") {
  const Polygon ell({{0, 0}, {1, 0}, {1, 0.5}, {0.5, 0.5}, {0.5, 1}, {0, 1}});
  const Polygon sq = unit_square(0.25, 0.25);
  // L-shape of area 0.75; overlap with [0.25,1.25]^2 square by hand:
  // [0.25,1]x[0.25,1] minus [0.5,1]x[0.5,1] = 0.5625 - 0.25 = 0.3125.
  CHECK(intersection_area(ell, sq) == doctest::Approx(0.3125).epsilon(1e-12));
  CHECK(intersection_area(sq, ell) == doctest::Approx(0.3125).epsilon(1e-12));
  CHECK(intersection_area(ell, ell) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("triangulation partitions area, rejects tangled rings") {
  const Polygon ell({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}});
  double s = 0.0;
  for (const auto& t : triangulate(ell)) s += t.signed_area();
  CHECK(s == doctest::Approx(3.0).epsilon(1e-13));

  std::mt19937 rng(7);
  for (int it = 0; it < 50; ++it) {
    const Polygon p = random_convex(rng);
    double a = 0.0;
    for (const auto& t : triangulate(p)) a += t.signed_area();
    CHECK(a == doctest::Approx(p.signed_area()).epsilon(1e-12));
  }

  const Polygon bowtie({{0, 0}, {1, 1}, {1, 0}, {0, 1}});
  CHECK_THROWS_AS((void)triangulate(bowtie), Error);
}

TEST_CASE("intersection area agrees with a Monte-Carlo oracle") {
  std::mt19937 rng(12345);
  std::mt19937 mc_rng(999);
  int tested = 0;
  for (int it = 0; it < 40; ++it) {
    const Polygon p = random_convex(rng);
    const Polygon q = random_convex(rng);
    const double a = intersection_area(p, q);
    const auto [est, se] = mc_intersection(p, q, 200000, mc_rng);
    if (se == 0.0) {
      CHECK(a == doctest::Approx(0.0).epsilon(1e-12));
      continue;
    }
    ++tested;
    CHECK(std::abs(a - est) <= 4.0 * se + 1e-6);
  }
  CHECK(tested > 10); // the generator must actually produce overlapping pairs
}

TEST_CASE("overlap map bookkeeping") {
  OverlapMap m;
  m.add(3, 1.0);
  m.add(1, 2.0);
  m.add(3, 0.5);
  CHECK(m.find(3) == doctest::Approx(1.5));
  CHECK(m.find(1) == doctest::Approx(2.0));
  CHECK(m.find(7) == 0.0);
  CHECK(m.total == doctest::Approx(3.5));
  CHECK(m.entries.front().first == 1); // sorted by cell
  m.add(5, -0.1);
  m.remove_nonpositive();
  CHECK(m.entries.size() == 2);
  CHECK(m.total == doctest::Approx(3.5));
}

TEST_CASE("overlap with mesh partitions the polygon area") {
  const PolyMesh mesh = build_cartesian(4, 4, 2.0, 2.0, 0.5);
  const Polygon p = unit_square(0.3, 0.3, 0.9);
  const OverlapMap om = overlap_with_mesh(p, mesh);
  CHECK(om.total == doctest::Approx(0.81).epsilon(1e-12));
  // Entries match direct cell-by-cell clipping.
  for (const auto& [K, a] : om.entries) {
    const double direct = intersection_area(p, mesh.cell_polygon(K));
    CHECK(a == doctest::Approx(direct).epsilon(1e-10));
  }
  // A polygon escaping the domain is an error.
  CHECK_THROWS_AS((void)overlap_with_mesh(unit_square(1.5, 1.5), mesh), Error);
}

TEST_CASE("overlap partition on many random polygons") {
  const PolyMesh mesh = build_cartesian(8, 8, 2.0, 2.0, 1.0);
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  for (int it = 0; it < 200; ++it) {
    Polygon p = random_convex(rng);
    // Shrink and shift into the domain.
    const auto bb = p.bbox();
    const double s = 0.4 / std::max(bb[1].x() - bb[0].x(), bb[1].y() - bb[0].y());
    const Vec2 shift(1.4 * ud(rng), 1.4 * ud(rng));
    for (auto& v : p.v) v = (v - bb[0]) * s + shift;
    const OverlapMap om = overlap_with_mesh(p, mesh);
    CHECK(std::abs(om.total - p.signed_area()) <= 1e-9 * p.signed_area());
  }
}

TEST_CASE("point location with boundary tie-breaking") {
  const PolyMesh mesh = build_cartesian(4, 4, 2.0, 2.0, 1.0);
  CHECK(locate_point(Vec2(0.25, 0.25), mesh) == 0);
  CHECK(locate_point(Vec2(1.75, 1.75), mesh) == 15);
  // Interior vertex shared by cells 0,1,4,5: lowest index wins.
  CHECK(locate_point(Vec2(0.5, 0.5), mesh) == 0);
  // Edge between cell 1 and cell 5.
  CHECK(locate_point(Vec2(0.75, 0.5), mesh) == 1);
  // Domain corner.
  CHECK(locate_point(Vec2(2.0, 2.0), mesh) == 15);
  CHECK(try_locate_point(Vec2(2.5, 0.5), mesh) == -1);
  CHECK_THROWS_AS((void)locate_point(Vec2(-0.1, 0.0), mesh), Error);
}
