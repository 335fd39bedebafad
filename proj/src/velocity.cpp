// Discrete velocity helpers.

#include "gemflow/velocity.hpp"

#include <cmath>

namespace gemflow {

double DiscreteVelocity::max_speed(const PolyMesh& mesh) const {
  double s = 0.0;
  for (int K = 0; K < mesh.n_cells(); ++K) {
    if (const WellModel* w = well_in_cell(K)) {
      // Linear field: the maximum over the cell is attained at a vertex.
      for (int vi : mesh.cells[K]) {
        const Vec2 u = w->strength * (mesh.vertices[vi] - w->center) + w->residual;
        s = std::max(s, u.norm());
      }
    } else {
      s = std::max(s, cell_vector[K].norm());
    }
  }
  return s;
}

} // namespace gemflow
