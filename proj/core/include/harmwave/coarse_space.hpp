#pragma once

#include <string>
#include <utility>
#include <vector>

#include "harmwave/fem.hpp"
#include "harmwave/harmonic.hpp"
#include "harmwave/solver.hpp"

namespace harmwave {

enum class BasisKind {
  /// Coarse hats composed with per-triangle local harmonic coordinates.
  lfem,
  /// Coarse hats composed with the global harmonic coordinates.
  p1_composed,
  /// Weighted cubic B-splines composed with the global harmonic coordinates.
  spline_composed,
};

std::string to_string(BasisKind kind);

/// Uniform cubic B-spline with unit knot spacing centered at 0 (support [-2, 2]).
double cubic_bspline(double s);

/// Coarse basis {phi_i} on [-1,1]^2 at a given coarse level.
///
/// Hats (lfem, p1_composed) sit on the coarse structured mesh: interior nodes
/// for Dirichlet, all nodes for Neumann. Splines are tensor products of
/// uniform cubic B-splines on the coarse grid (spacing h = 2 / 2^level): every
/// spline whose support meets the open square, (2^level + 3)^2 in total. For
/// Dirichlet they are multiplied by w(x, y) = (1 - x^2)(1 - y^2), for Neumann
/// w = 1.
class CoarseBasis {
 public:
  /// Throws ConfigError for level < 1.
  static CoarseBasis build(BasisKind kind, int level, Boundary bc);

  BasisKind kind() const noexcept { return kind_; }
  int level() const noexcept { return level_; }
  Boundary boundary() const noexcept { return bc_; }
  Index size() const noexcept;
  const TriMesh& coarse_mesh() const noexcept { return mesh_; }
  const DofMap& coarse_dofs() const noexcept { return dofs_; }

  /// Nonzero basis values at p as (index, value) pairs. Points outside the
  /// square are clamped onto it.
  std::vector<std::pair<Index, double>> nonzeros(Point p) const;
  double operator()(Index i, Point p) const;
  double weight(Point p) const noexcept;

 private:
  BasisKind kind_ = BasisKind::p1_composed;
  int level_ = 1;
  Boundary bc_ = Boundary::dirichlet;
  TriMesh mesh_;
  DofMap dofs_;
  Index spline_first_ = 0;  // index of the first 1D spline center
  Index spline_count_ = 0;  // 1D splines per direction
};

/// Sparse fine-dof x coarse-basis matrix, R(j, i) = psi_i(x_j).
using RepresentationMatrix = SparseMatrix;

/// R(j, i) = phi_i(F(x_j)) at every fine dof, with F clamped into the square.
RepresentationMatrix representation(const CoarseBasis& basis, const HarmonicMap& map,
                                    const TriMesh& fine, const DofMap& fine_dofs);

/// LFEM basis values at the fine dofs. On each coarse triangle K a local
/// harmonic map F_K (F_K = x on the boundary of K) is solved on the fine
/// submesh and psi_i = lambda_i^K o F_K. The fine mesh must refine the coarse
/// one. Local solver failures are rethrown naming the coarse triangle.
RepresentationMatrix lfem_representation(const CoarseBasis& basis, const TriMesh& fine,
                                         const CoefficientField& field, const DofMap& fine_dofs,
                                         const SolverOptions& options = {});

struct CoarseOperators {
  SparseMatrix stiffness;  // R^T A R
  SparseMatrix mass;       // R^T M R
  /// max |K - K^T| / max |K| over both products before symmetrization.
  double asymmetry = 0.0;

  Index size() const noexcept { return static_cast<Index>(stiffness.rows()); }
};

/// Galerkin triple products. Throws SolverError when the projected mass is
/// not positive definite (basis functions collapsed under F).
CoarseOperators project_operators(const RepresentationMatrix& r, const SparseMatrix& fine_stiffness,
                                  const SparseMatrix& fine_mass);

Vector project_load(const RepresentationMatrix& r, const Vector& fine_load);

/// a-orthogonal projection: solves K_c c = R^T A u.
Vector ritz_project(const Vector& fine_values, const RepresentationMatrix& r,
                    const SparseMatrix& fine_stiffness, const CoarseOperators& ops,
                    const SolverOptions& options = {});

}  // namespace harmwave
