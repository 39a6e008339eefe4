#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "harmwave/media.hpp"
#include "harmwave/mesh.hpp"

namespace harmwave {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, Index>;
using Vector = Eigen::VectorXd;
using ElementMatrix = Eigen::Matrix3d;

enum class Boundary { dirichlet, neumann };

std::string to_string(Boundary bc);

/// Numbering of the unknowns of a P1 problem. With Dirichlet conditions the
/// boundary vertices are eliminated; with Neumann every vertex is a dof.
class DofMap {
 public:
  DofMap() = default;
  DofMap(const TriMesh& mesh, Boundary bc);

  Boundary boundary() const noexcept { return bc_; }
  Index size() const noexcept { return static_cast<Index>(vertex_of_dof_.size()); }
  Index num_vertices() const noexcept { return static_cast<Index>(dof_of_vertex_.size()); }
  /// -1 for eliminated vertices.
  Index dof(Index vertex) const { return dof_of_vertex_.at(vertex); }
  Index vertex(Index dof) const { return vertex_of_dof_.at(dof); }
  std::span<const Index> constrained() const noexcept { return constrained_; }

  /// Scatter dof values into a nodal vector (eliminated vertices get 0).
  Vector to_nodal(const Vector& dofs) const;
  Vector from_nodal(const Vector& nodal) const;

 private:
  Boundary bc_ = Boundary::dirichlet;
  std::vector<Index> dof_of_vertex_;
  std::vector<Index> vertex_of_dof_;
  std::vector<Index> constrained_;
};

/// Assembled symmetric matrix together with the numbering it lives on.
struct SparseSym {
  SparseMatrix matrix;
  DofMap dofs;

  Index dimension() const noexcept { return static_cast<Index>(matrix.rows()); }
};

/// Exact integral of grad(phi_i)^T a grad(phi_j) over a P1 triangle.
/// Throws GeometryError for (numerically) zero area.
ElementMatrix element_stiffness(const std::array<Point, 3>& tri, double a);
ElementMatrix element_stiffness(const std::array<Point, 3>& tri, const Eigen::Matrix2d& a);

/// Exact P1 mass matrix scaled by kinv: kinv |T| / 12 [[2,1,1],[1,2,1],[1,1,2]].
ElementMatrix element_mass(const std::array<Point, 3>& tri, double kinv);

/// Gradients of the three barycentric functions (rows) of a triangle.
Eigen::Matrix<double, 3, 2> barycentric_gradients(const std::array<Point, 3>& tri);

std::vector<ElementMatrix> stiffness_matrices(const TriMesh& mesh, const CoefficientField& field);
std::vector<ElementMatrix> mass_matrices(const TriMesh& mesh, double kinv);

/// Scatter-add of element matrices onto the dofs. Rows and columns of
/// eliminated vertices are dropped. Throws ConfigError on a size mismatch.
SparseSym assemble(const TriMesh& mesh, std::span<const ElementMatrix> elements, const DofMap& dofs);

/// Same matrix over all vertices, no elimination.
SparseMatrix assemble_full(const TriMesh& mesh, std::span<const ElementMatrix> elements);

/// L2 pairing (phi_i, g) by the three-point edge-midpoint rule on every element.
Vector load_vector(const TriMesh& mesh, const DofMap& dofs, const std::function<double(Point)>& g);
/// Load of the full source at time t (sum of its separable terms).
Vector load_vector(const TriMesh& mesh, const DofMap& dofs, const SourceTerm& source, double t);

/// Coordinate dump `i j value`, lower triangle only, sorted by (i, j).
void write_matrix(std::ostream& out, const SparseMatrix& matrix);

}  // namespace harmwave
