#pragma once

#include <memory>

#include "harmwave/fem.hpp"

namespace harmwave {

enum class SolverKind {
  /// Sparse Cholesky (Eigen SimplicialLLT, AMD ordering) with residual check
  /// and iterative refinement.
  cholesky,
  /// Conjugate gradients with Jacobi preconditioning.
  jacobi_cg,
};

struct SolverOptions {
  SolverKind kind = SolverKind::cholesky;
  double rel_tol = 1e-10;
  int max_iter = 20000;
};

struct SolveStats {
  int iterations = 0;
  double residual = 0.0;  // ||A x - b|| / ||b||
};

/// Reusable solver for one symmetric positive definite matrix. The
/// factorization (or preconditioner) is built once in the constructor and
/// shared by every subsequent solve.
///
/// Throws SolverError when the matrix is not positive definite, when the
/// residual contract ||Ax - b|| <= rel_tol ||b|| cannot be met, or when CG
/// encounters non-positive curvature.
class SpdSolver {
 public:
  SpdSolver(const SparseMatrix& matrix, SolverOptions options = {});
  ~SpdSolver();
  SpdSolver(SpdSolver&&) noexcept;
  SpdSolver& operator=(SpdSolver&&) noexcept;

  Index dimension() const noexcept;
  const SolverOptions& options() const noexcept;

  Vector solve(const Vector& rhs, SolveStats* stats = nullptr) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One-shot convenience wrapper around SpdSolver.
Vector solve_spd(const SparseMatrix& matrix, const Vector& rhs, const SolverOptions& options = {},
                 SolveStats* stats = nullptr);

}  // namespace harmwave
