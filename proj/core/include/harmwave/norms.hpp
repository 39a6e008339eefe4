#pragma once

#include "harmwave/coarse_space.hpp"
#include "harmwave/fem.hpp"

namespace harmwave {

enum class Norm { L1, Linf, L2, H1 };

struct NormSet {
  double l1 = 0.0;
  double linf = 0.0;
  double l2 = 0.0;
  double h1 = 0.0;

  double get(Norm which) const noexcept;
};

/// Norms of the P1 interpolant of `values` (one entry per dof; eliminated
/// vertices are zero). L1 and L2 use the edge-midpoint rule, Linf is the
/// nodal max, and H1 is the full norm with unit-coefficient gradient term.
double discrete_norm(const Vector& values, Norm which, const TriMesh& mesh, const DofMap& dofs);
NormSet discrete_norms(const Vector& values, const TriMesh& mesh, const DofMap& dofs);

/// Fine dof values R * coarse.
Vector prolong(const RepresentationMatrix& r, const Vector& coarse);

/// ||R v - u|| / ||u||. Throws UndefinedErrorMetric when ||u|| = 0.
double relative_error(const Vector& coarse, const Vector& reference, const RepresentationMatrix& r,
                      const TriMesh& mesh, const DofMap& dofs, Norm which);
/// All four relative errors of a fine field against a fine reference.
NormSet relative_errors(const Vector& fine_values, const Vector& reference, const TriMesh& mesh,
                        const DofMap& dofs);

}  // namespace harmwave
