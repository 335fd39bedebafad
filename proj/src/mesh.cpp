// Polygonal mesh container: Cartesian builder, file I/O, face topology,
// regularity measure, and the per-cell edge sampling policy used by the
// characteristic tracking.

#include "gemflow/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace gemflow {

namespace {

// Finish a mesh whose vertices/cells/porosity are set: areas, centroids,
// faces, bounding box, bin index.
void finalize(PolyMesh& m) {
  const int nc = m.n_cells();
  m.cell_area.resize(nc);
  m.cell_centroid.resize(nc);
  m.cell_diam.resize(nc);
  m.cell_is_convex.resize(nc);
  m.cell_faces.assign(nc, {});

  m.dom_lo = Vec2(std::numeric_limits<double>::max(), std::numeric_limits<double>::max());
  m.dom_hi = -m.dom_lo;
  for (const auto& v : m.vertices) {
    m.dom_lo = m.dom_lo.cwiseMin(v);
    m.dom_hi = m.dom_hi.cwiseMax(v);
  }

  m.domain_area = 0.0;
  for (int K = 0; K < nc; ++K) {
    const Polygon p = m.cell_polygon(K);
    const double a = p.signed_area();
    if (a <= 0.0) throw Error("mesh: cell " + std::to_string(K) + " is not counterclockwise or is degenerate");
    if (p.self_intersects()) throw Error("mesh: cell " + std::to_string(K) + " is self-intersecting");
    m.cell_area[K] = a;
    m.cell_centroid[K] = p.centroid();
    m.cell_diam[K] = p.diameter();
    m.cell_is_convex[K] = p.convex();
    m.domain_area += a;
  }

  // The domain is the bounding rectangle of the vertices; a mismatch between
  // the summed cell areas and that rectangle means a hole or an overlap.
  const double bbox_area = (m.dom_hi - m.dom_lo).prod();
  if (std::abs(m.domain_area - bbox_area) > 1e-9 * bbox_area)
    throw Error("mesh: cells do not tile the bounding rectangle (total cell area " +
                std::to_string(m.domain_area) + " vs " + std::to_string(bbox_area) +
                "; hole or overlapping cells)");

  // Face topology: each undirected vertex pair appears in at most two cells.
  std::map<std::pair<int, int>, int> edge_to_face;
  m.faces.clear();
  for (int K = 0; K < nc; ++K) {
    const auto& idx = m.cells[K];
    const std::size_t n = idx.size();
    m.cell_faces[K].resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const int a = idx[i];
      const int b = idx[(i + 1) % n];
      const auto key = std::minmax(a, b);
      auto it = edge_to_face.find(key);
      if (it == edge_to_face.end()) {
        Face f;
        f.v0 = a;
        f.v1 = b;
        f.left = K;
        f.right = -1;
        const Vec2 pa = m.vertices[a];
        const Vec2 pb = m.vertices[b];
        f.length = (pb - pa).norm();
        if (f.length <= 0.0) throw Error("mesh: zero-length face in cell " + std::to_string(K));
        f.midpoint = 0.5 * (pa + pb);
        // CCW cell on the left: outward normal is the edge tangent rotated -90 degrees.
        f.normal = Vec2((pb - pa).y(), -(pb - pa).x()) / f.length;
        const int fi = static_cast<int>(m.faces.size());
        m.faces.push_back(f);
        edge_to_face.emplace(key, fi);
        m.cell_faces[K][i] = fi;
      } else {
        Face& f = m.faces[it->second];
        if (f.right != -1)
          throw Error("mesh: edge shared by more than two cells near vertex " + std::to_string(a));
        f.right = K;
        m.cell_faces[K][i] = it->second;
      }
    }
  }

  // Bin grid sized so each bin holds a handful of cells.
  const int nb = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(nc))));
  m.index = BinIndex(m.dom_lo, m.dom_hi, nb, nb);
  for (int K = 0; K < nc; ++K) {
    const auto bb = m.cell_polygon(K).bbox();
    m.index.insert(K, bb[0], bb[1]);
  }
}

} // namespace

Polygon PolyMesh::cell_polygon(int K) const {
  Polygon p;
  p.v.reserve(cells[K].size());
  for (int vi : cells[K]) p.v.push_back(vertices[vi]);
  return p;
}

std::vector<int> PolyMesh::cell_neighbors(int K) const {
  std::vector<int> out;
  for (int fi : cell_faces[K]) {
    const Face& f = faces[fi];
    const int other = (f.left == K) ? f.right : f.left;
    if (other >= 0) out.push_back(other);
  }
  return out;
}

bool PolyMesh::cell_on_boundary(int K) const {
  for (int fi : cell_faces[K])
    if (faces[fi].right == -1) return true;
  return false;
}

double PolyMesh::total_porous_volume() const {
  double s = 0.0;
  for (int K = 0; K < n_cells(); ++K) s += porous_volume(K);
  return s;
}

double PolyMesh::min_inradius() const {
  double r = std::numeric_limits<double>::max();
  for (int K = 0; K < n_cells(); ++K) {
    double per = 0.0;
    for (int fi : cell_faces[K]) per += faces[fi].length;
    r = std::min(r, cell_area[K] / per);
  }
  return r;
}

double PolyMesh::phi_min() const {
  return *std::min_element(porosity.begin(), porosity.end());
}

void PolyMesh::set_uniform_porosity(double phi) {
  porosity.assign(static_cast<std::size_t>(n_cells()), phi);
}

PolyMesh build_cartesian(int nx, int ny, double lx, double ly, double phi) {
  if (nx < 1 || ny < 1 || lx <= 0.0 || ly <= 0.0)
    throw Error("build_cartesian: invalid dimensions");
  if (phi <= 0.0 || phi > 1.0) throw Error("build_cartesian: porosity must be in (0,1]");
  PolyMesh m;
  m.vertices.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      m.vertices.emplace_back(lx * i / nx, ly * j / ny);
  auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
  m.cells.reserve(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      m.cells.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)});
  m.porosity.assign(m.cells.size(), phi);
  m.porosity_from_file = false;
  finalize(m);
  return m;
}

PolyMesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("load_mesh: cannot open " + path);

  // Token stream with '#' line comments.
  auto next_line = [&in](std::string& line) -> bool {
    while (std::getline(in, line)) {
      const auto h = line.find('#');
      if (h != std::string::npos) line.erase(h);
      if (line.find_first_not_of(" \t\r\n") != std::string::npos) return true;
    }
    return false;
  };

  std::string line;
  if (!next_line(line)) throw Error("load_mesh: empty file " + path);
  {
    std::istringstream ss(line);
    std::string magic;
    int version = 0;
    ss >> magic >> version;
    if (magic != "POLYMESH2D" || version != 1)
      throw Error("load_mesh: " + path + " is not a POLYMESH2D 1 file");
  }

  PolyMesh m;
  int nv = 0;
  if (!next_line(line)) throw Error("load_mesh: missing vertex count");
  if (std::istringstream ss(line); !(ss >> nv) || nv < 3)
    throw Error("load_mesh: bad vertex count");
  m.vertices.reserve(nv);
  for (int i = 0; i < nv; ++i) {
    if (!next_line(line)) throw Error("load_mesh: missing vertex " + std::to_string(i));
    std::istringstream ss(line);
    double x, y;
    if (!(ss >> x >> y)) throw Error("load_mesh: bad vertex line: " + line);
    m.vertices.emplace_back(x, y);
  }

  int nc = 0;
  if (!next_line(line)) throw Error("load_mesh: missing cell count");
  if (std::istringstream ss(line); !(ss >> nc) || nc < 1)
    throw Error("load_mesh: bad cell count");
  m.cells.reserve(nc);
  for (int c = 0; c < nc; ++c) {
    if (!next_line(line)) throw Error("load_mesh: missing cell " + std::to_string(c));
    std::istringstream ss(line);
    int k = 0;
    if (!(ss >> k) || k < 3) throw Error("load_mesh: bad cell size in: " + line);
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) {
      if (!(ss >> idx[i]) || idx[i] < 0 || idx[i] >= nv)
        throw Error("load_mesh: bad vertex index in: " + line);
    }
    m.cells.push_back(std::move(idx));
  }

  m.porosity_from_file = false;
  if (next_line(line)) {
    std::istringstream ss(line);
    std::string kw;
    ss >> kw;
    if (kw != "POROSITY")
      throw Error("load_mesh: unexpected trailing content: " + line);
    m.porosity.reserve(nc);
    for (int c = 0; c < nc; ++c) {
      if (!next_line(line)) throw Error("load_mesh: missing porosity value " + std::to_string(c));
      std::istringstream vs(line);
      double phi;
      if (!(vs >> phi) || phi <= 0.0 || phi > 1.0)
        throw Error("load_mesh: porosity out of (0,1]: " + line);
      m.porosity.push_back(phi);
    }
    m.porosity_from_file = true;
  } else {
    m.porosity.assign(static_cast<std::size_t>(nc), 1.0);
  }

  finalize(m);
  return m;
}

void save_mesh(const PolyMesh& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("save_mesh: cannot write " + path);
  out.precision(17);
  out << "POLYMESH2D 1\n" << m.vertices.size() << "\n";
  for (const auto& v : m.vertices) out << v.x() << " " << v.y() << "\n";
  out << m.cells.size() << "\n";
  for (const auto& c : m.cells) {
    out << c.size();
    for (int vi : c) out << " " << vi;
    out << "\n";
  }
  if (m.porosity_from_file) {
    out << "POROSITY\n";
    for (double phi : m.porosity) out << phi << "\n";
  }
  if (!out) throw Error("save_mesh: write failure on " + path);
}

double regularity(const PolyMesh& m, int K) {
  // Squared diameter over area; 2 on squares, growing with aspect ratio and
  // distortion. Scale-invariant.
  return m.cell_diam[K] * m.cell_diam[K] / m.cell_area[K];
}

TrackingPolicy TrackingPolicy::from_mesh(const PolyMesh& m, bool adjustment_on, int override_points) {
  TrackingPolicy pol;
  const int nc = m.n_cells();
  pol.points_per_edge.resize(nc);

  std::vector<int> base(nc);
  int max_base = 1;
  double mean_base = 0.0;
  for (int K = 0; K < nc; ++K) {
    const double r = regularity(m, K);
    // ceil(log2 r) with a guard against r landing a hair above a power of 2.
    int b = 1;
    if (r > 2.0) {
      const double l = std::log2(r);
      b = static_cast<int>(std::ceil(l - 1e-9));
    }
    b = std::max(1, b);
    base[K] = b;
    max_base = std::max(max_base, b);
    mean_base += b;
  }
  mean_base /= nc;

  for (int K = 0; K < nc; ++K) {
    int n = base[K];
    if (adjustment_on && max_base >= 2) n = 2 * n + 1;
    if (override_points > 0) n = override_points;
    pol.points_per_edge[K] = n;
  }
  const int nbar = std::max(1, static_cast<int>(std::lround(mean_base)));
  pol.well_points_per_edge = 4 * nbar + 1;
  if (override_points > 0) pol.well_points_per_edge = std::max(pol.well_points_per_edge, override_points);
  return pol;
}

} // namespace gemflow
