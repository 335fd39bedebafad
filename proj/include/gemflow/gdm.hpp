// Hybrid cell+face diffusion discretisation, pressure solve with pure
// Neumann boundary and zero-mean constraint, Darcy velocity reconstruction
// from the hybrid fluxes, and the physics closures (viscosity, dispersion).

#pragma once

#include "gemflow/common.hpp"
#include "gemflow/mesh.hpp"
#include "gemflow/velocity.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <vector>

namespace gemflow {

/// Mixture viscosity in cp: mu0 * [(1-c) + M^{1/4} c]^{-4}. The concentration
/// is clamped to [0,1] for evaluation only; transported values keep their
/// overshoots.
double viscosity(double c, double mu0, double mobility_ratio);

/// Dispersion lengths: molecular dm (ft^2/day), longitudinal dl (ft),
/// transverse dt (ft).
struct DispersionModel {
  double dm = 0.0;
  double dl = 0.0;
  double dt = 0.0;
};

/// D(x,u) = phi [ dm I + dl |u| E(u) + dt |u| (I - E(u)) ] with
/// E(u) = u u^T/|u|^2; phi dm I when u = 0. Symmetric positive semidefinite.
Eigen::Matrix2d dispersion_tensor(double phi, const Vec2& u, const DispersionModel& model);

/// Hybrid discretisation with one unknown per cell and one per face. The
/// local bilinear form on cell K for a tensor L is
///   a_K(u,v) = |K| L grad_K u . grad_K v
///            + sum_faces (|s|/d_Ks)(n^T L n) R_s(u) R_s(v),
/// with grad_K the face-consistent gradient and R_s the stabilising
/// remainder. On rectangles with diagonal tensors this reduces to the
/// classical two-point flux scheme, which the tests exploit as an oracle.
class HybridGD {
public:
  explicit HybridGD(const PolyMesh& mesh);

  const PolyMesh& mesh() const { return *mesh_; }
  int n_cells() const { return mesh_->n_cells(); }
  int n_dofs() const { return mesh_->n_cells() + mesh_->n_faces(); }
  int cell_dof(int K) const { return K; }
  int face_dof(int fi) const { return mesh_->n_cells() + fi; }

  /// Dense local matrix of a_K, ordered [cell, face 0, face 1, ...] following
  /// cell_faces[K]. Symmetric, zero row sums.
  Eigen::MatrixXd local_matrix(int K, const Eigen::Matrix2d& L) const;

  /// Global assembly of a(u,v) = sum_K a_K over all DOFs.
  Eigen::SparseMatrix<double> assemble(const std::vector<Eigen::Matrix2d>& L) const;

  /// Per-face flux of -L grad u out of faces[i].left, recovered from the
  /// local matrices: F_{K,s}(u) = -(A_K u_loc)_s.
  std::vector<double> face_fluxes(const std::vector<Eigen::Matrix2d>& L,
                                  const Eigen::VectorXd& dofs) const;

  /// Face-consistent gradient of a DOF vector on cell K.
  Vec2 cell_gradient(int K, const Eigen::VectorXd& dofs) const;

  /// DOFs from per-cell averages: cell values copied, interior faces take the
  /// mean of the two neighbours, boundary faces the one cell value.
  Eigen::VectorXd interpolate(const std::vector<double>& cell_values) const;

private:
  const PolyMesh* mesh_;
  std::vector<double> d_ks_; // per (cell, local face): centroid-to-face distance
  std::vector<std::size_t> d_ks_offset_;
  double dist(int K, std::size_t li) const { return d_ks_[d_ks_offset_[K] + li]; }
};

/// Solved pressure DOFs with the diffusivity tensors used to produce them
/// (needed again for flux recovery).
struct PressureSolution {
  Eigen::VectorXd dofs;
  std::vector<Eigen::Matrix2d> lambda;
};

/// Solve the pure-Neumann pressure equation with diffusivity perm/mu(c_K),
/// well sources on the right-hand side, and a zero-mean constraint via a
/// Lagrange multiplier. Throws on incompatible sources (nonzero net rate) or
/// a failed factorisation; the residual is checked to 1e-10 relative.
PressureSolution solve_pressure(const HybridGD& gd, const std::vector<double>& c,
                                const Wells& wells, const Eigen::Matrix2d& perm,
                                double mu0, double mobility_ratio);

/// Darcy velocity from a pressure solution: conservative face fluxes, a
/// least-squares constant vector per cell, the discrete divergence, and a
/// linear in-cell model for each well cell (uniform divergence sign*Q/|K|,
/// constant part fit to the residual face fluxes).
DiscreteVelocity reconstruct_velocity(const HybridGD& gd, const PressureSolution& p,
                                      const Wells& wells);

/// dt-scaled diffusion operator with the per-cell tensors D: contributes
/// dt * a(u,v) on all DOFs. Zero tensors give an empty matrix.
Eigen::SparseMatrix<double> assemble_diffusion(const HybridGD& gd,
                                               const std::vector<Eigen::Matrix2d>& D,
                                               double dt);

} // namespace gemflow
