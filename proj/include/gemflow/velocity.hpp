// Cell-wise Darcy velocity fields. The discrete field carries per-face
// fluxes, a constant vector per cell, per-cell divergence, and a linear
// in-cell model for well cells so that the divergence there is uniform
// instead of concentrated at the well point.

#pragma once

#include "gemflow/common.hpp"
#include "gemflow/mesh.hpp"

#include <functional>
#include <vector>

namespace gemflow {

/// Linear velocity model inside a well cell:
///   u(x) = strength * (x - center) + residual,
/// with strength = sign * Q / (2|K|), so div u = sign * Q / |K| uniformly.
/// The residual is a constant chosen to best match the face fluxes left over
/// after subtracting the radial part.
struct WellModel {
  int cell = -1;
  Vec2 center{0.0, 0.0};
  double strength = 0.0;
  Vec2 residual{0.0, 0.0};
};

/// Darcy velocity reconstructed from a pressure solve (or assembled directly
/// in tests). face_flux[i] is the signed flux through faces[i], positive out
/// of faces[i].left.
struct DiscreteVelocity {
  std::vector<double> face_flux;
  std::vector<Vec2> cell_vector;
  std::vector<double> cell_div;
  std::vector<WellModel> wells;

  /// Flux through face `fi` oriented outward from cell K.
  double outward_flux(const PolyMesh& mesh, int K, int fi) const {
    return mesh.faces[fi].left == K ? face_flux[fi] : -face_flux[fi];
  }

  /// The well model attached to cell K, or nullptr.
  const WellModel* well_in_cell(int K) const {
    for (const auto& w : wells)
      if (w.cell == K) return &w;
    return nullptr;
  }

  /// Velocity at x given the containing cell: the well model if K hosts a
  /// well, the constant cell vector otherwise.
  Vec2 velocity_in_cell(const Vec2& x, int K) const {
    if (const WellModel* w = well_in_cell(K))
      return w->strength * (x - w->center) + w->residual;
    return cell_vector[K];
  }

  /// Supremum of |u| over the mesh (well-cell models peak at cell corners).
  double max_speed(const PolyMesh& mesh) const;
};

/// Velocity field abstraction used by the characteristic tracking. `cell` is
/// the cell containing x; implementations may ignore it.
class FlowField {
public:
  virtual ~FlowField() = default;
  virtual Vec2 velocity(const Vec2& x, int cell) const = 0;
  virtual double divergence(int cell) const = 0;
  virtual double max_speed() const = 0;

  /// Hook to re-attribute a point sitting on a cell boundary. The default
  /// keeps the located cell; the discrete field prefers a well cell whose
  /// closure contains x, since the in-cell well model is the better local
  /// description of the velocity there.
  virtual int resolve_cell(const Vec2& x, int located) const {
    (void)x;
    return located;
  }
};

/// FlowField view over a DiscreteVelocity.
class DiscreteFlow final : public FlowField {
public:
  DiscreteFlow(const PolyMesh& mesh, const DiscreteVelocity& vel)
      : mesh_(mesh), vel_(vel), max_speed_(vel.max_speed(mesh)) {}

  Vec2 velocity(const Vec2& x, int cell) const override {
    return vel_.velocity_in_cell(x, cell);
  }
  double divergence(int cell) const override { return vel_.cell_div[cell]; }
  double max_speed() const override { return max_speed_; }

  int resolve_cell(const Vec2& x, int located) const override {
    for (const auto& w : vel_.wells)
      if (w.cell != located && cell_contains(mesh_, w.cell, x)) return w.cell;
    return located;
  }

private:
  const PolyMesh& mesh_;
  const DiscreteVelocity& vel_;
  double max_speed_;
};

/// FlowField from closed-form functions, for tests and oracles. Divergence is
/// averaged over each cell by sampling the given function at the centroid.
class AnalyticFlow final : public FlowField {
public:
  AnalyticFlow(const PolyMesh& mesh, std::function<Vec2(const Vec2&)> u,
               std::function<double(const Vec2&)> div_u, double vmax)
      : mesh_(mesh), u_(std::move(u)), div_(std::move(div_u)), max_speed_(vmax) {}

  Vec2 velocity(const Vec2& x, int) const override { return u_(x); }
  double divergence(int cell) const override { return div_(mesh_.cell_centroid[cell]); }
  double max_speed() const override { return max_speed_; }

private:
  const PolyMesh& mesh_;
  std::function<Vec2(const Vec2&)> u_;
  std::function<double(const Vec2&)> div_;
  double max_speed_;
};

} // namespace gemflow
