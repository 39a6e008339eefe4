#include "harmwave/solver.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>
#include <optional>
#include <string>

#include "harmwave/errors.hpp"

namespace harmwave {

struct SpdSolver::Impl {
  SparseMatrix matrix;
  SolverOptions options;
  std::optional<Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<Index>>> llt;
  Vector inv_diagonal;

  Vector solve_cholesky(const Vector& rhs, SolveStats& stats) const {
    const double rhs_norm = rhs.norm();
    Vector x = llt->solve(rhs);
    Vector residual = rhs - matrix * x;
    stats.residual = residual.norm() / rhs_norm;
    // A couple of refinement sweeps recover the contract on badly scaled
    // systems (high contrast media).
    for (int sweep = 0; sweep < 3 && stats.residual > options.rel_tol; ++sweep) {
      x += llt->solve(residual);
      residual = rhs - matrix * x;
      stats.residual = residual.norm() / rhs_norm;
      stats.iterations = sweep + 1;
    }
    if (!std::isfinite(stats.residual) || stats.residual > options.rel_tol) {
      throw SolverError("cholesky solve missed tolerance: residual " + std::to_string(stats.residual),
                        stats.residual, stats.iterations);
    }
    return x;
  }

  Vector solve_cg(const Vector& rhs, SolveStats& stats) const {
    const double rhs_norm = rhs.norm();
    Vector x = Vector::Zero(rhs.size());
    Vector r = rhs;
    Vector z = inv_diagonal.cwiseProduct(r);
    Vector p = z;
    double rz = r.dot(z);
    for (int it = 1; it <= options.max_iter; ++it) {
      const Vector ap = matrix * p;
      const double curvature = p.dot(ap);
      if (!(curvature > 0.0)) {
        stats.iterations = it;
        stats.residual = r.norm() / rhs_norm;
        throw SolverError("cg detected non-positive curvature; matrix is not SPD", stats.residual, it);
      }
      const double alpha = rz / curvature;
      x += alpha * p;
      r -= alpha * ap;
      stats.iterations = it;
      stats.residual = r.norm() / rhs_norm;
      if (stats.residual <= options.rel_tol) {
        // Recompute the true residual to guard against drift in r.
        stats.residual = (rhs - matrix * x).norm() / rhs_norm;
        if (stats.residual <= options.rel_tol) return x;
        r = rhs - matrix * x;
      }
      z = inv_diagonal.cwiseProduct(r);
      const double rz_next = r.dot(z);
      p = z + (rz_next / rz) * p;
      rz = rz_next;
    }
    throw SolverError("cg did not converge in " + std::to_string(options.max_iter) +
                          " iterations, residual " + std::to_string(stats.residual),
                      stats.residual, stats.iterations);
  }
};

SpdSolver::SpdSolver(const SparseMatrix& matrix, SolverOptions options)
    : impl_(std::make_unique<Impl>()) {
  if (matrix.rows() != matrix.cols()) throw SolverError("matrix is not square");
  if (!(options.rel_tol > 0.0) || options.max_iter < 1) {
    throw ConfigError("solver tolerance and iteration budget must be positive");
  }
  impl_->matrix = matrix;
  impl_->options = options;
  if (matrix.rows() == 0) return;

  if (options.kind == SolverKind::cholesky) {
    impl_->llt.emplace(impl_->matrix);
    if (impl_->llt->info() != Eigen::Success) {
      throw SolverError("cholesky factorization failed: matrix is not positive definite");
    }
  } else {
    const Vector diagonal = impl_->matrix.diagonal();
    if ((diagonal.array() <= 0.0).any()) {
      throw SolverError("non-positive diagonal entry: matrix is not SPD");
    }
    impl_->inv_diagonal = diagonal.cwiseInverse();
  }
}

SpdSolver::~SpdSolver() = default;
SpdSolver::SpdSolver(SpdSolver&&) noexcept = default;
SpdSolver& SpdSolver::operator=(SpdSolver&&) noexcept = default;

Index SpdSolver::dimension() const noexcept { return static_cast<Index>(impl_->matrix.rows()); }

const SolverOptions& SpdSolver::options() const noexcept { return impl_->options; }

Vector SpdSolver::solve(const Vector& rhs, SolveStats* stats) const {
  if (rhs.size() != dimension()) throw ConfigError("right-hand side has wrong length");
  SolveStats local;
  SolveStats& s = stats ? *stats : local;
  s = {};
  if (rhs.size() == 0 || rhs.squaredNorm() == 0.0) return Vector::Zero(rhs.size());
  return impl_->options.kind == SolverKind::cholesky ? impl_->solve_cholesky(rhs, s)
                                                     : impl_->solve_cg(rhs, s);
}

Vector solve_spd(const SparseMatrix& matrix, const Vector& rhs, const SolverOptions& options,
                 SolveStats* stats) {
  return SpdSolver(matrix, options).solve(rhs, stats);
}

}  // namespace harmwave
