#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "harmwave/coarse_space.hpp"
#include "harmwave/fem.hpp"
#include "harmwave/media.hpp"
#include "harmwave/solver.hpp"

namespace harmwave {

/// Coefficients of v_h(t_n) and of its left time derivative at t_n.
struct WaveState {
  Vector v;
  Vector p;
  double t = 0.0;
  int n = 0;
};

/// Time integral of a projected source over one step,
///   G_n = int_{t_n}^{t_{n+1}} R^T f(t) dt,
/// evaluated by two-point Gauss-Legendre on each separable term.
class LoadIntegrator {
 public:
  /// The zero source on `size` unknowns.
  explicit LoadIntegrator(Index size = 0) : size_(size) {}
  LoadIntegrator(Index size, std::vector<std::function<double(double)>> time, std::vector<Vector> space);

  Index size() const noexcept { return size_; }
  bool is_zero() const noexcept { return space_.empty(); }
  Vector integrate(double t0, double t1) const;
  /// Same integrator with every spatial vector multiplied by `factor`.
  LoadIntegrator scaled(double factor) const;

 private:
  Index size_ = 0;
  std::vector<std::function<double(double)>> time_;
  std::vector<Vector> space_;
};

/// Loads of `source` on the fine dofs, projected through R when given.
LoadIntegrator make_load(const SourceTerm& source, const TriMesh& fine, const DofMap& fine_dofs,
                         const RepresentationMatrix* r = nullptr);

/// Mass, stiffness and the implicit matrix S = M + (dt^2 / 2) K with its
/// factorization. S is rebuilt only when dt changes.
class SteppingSystem {
 public:
  SteppingSystem(SparseMatrix mass, SparseMatrix stiffness, double dt, SolverOptions options = {});

  Index size() const noexcept { return static_cast<Index>(mass_.rows()); }
  double dt() const noexcept { return dt_; }
  void set_dt(double dt);
  const SparseMatrix& mass() const noexcept { return mass_; }
  const SparseMatrix& stiffness() const noexcept { return stiffness_; }
  const SpdSolver& solver() const noexcept { return solver_; }
  /// Number of times S has been factorized.
  int factorizations() const noexcept { return factorizations_; }

 private:
  static SpdSolver factorize(const SparseMatrix& mass, const SparseMatrix& stiffness, double dt,
                             const SolverOptions& options);

  SparseMatrix mass_;
  SparseMatrix stiffness_;
  double dt_;
  SolverOptions options_;
  SpdSolver solver_;
  int factorizations_ = 1;
};

/// Ritz projections of the initial displacement and velocity.
WaveState init_state(const Vector& u0_fine, const Vector& v0_fine, const RepresentationMatrix& r,
                     const SparseMatrix& fine_stiffness, const CoarseOperators& ops,
                     const SolverOptions& options = {});

/// One implicit step:
///   (M + dt^2/2 K) p_{n+1} = M p_n - dt K v_n + G_n,   v_{n+1} = v_n + dt p_{n+1}.
/// Solver failures are rethrown with the step index.
WaveState step(const WaveState& state, const SteppingSystem& sys, const Vector& load_integral);

/// p^T M p + v^T K v.
double energy(const WaveState& state, const SparseMatrix& mass, const SparseMatrix& stiffness);

struct StepRecord {
  int n = 0;
  double t = 0.0;
  double energy = 0.0;
};

struct RunResult {
  WaveState final_state;
  std::vector<StepRecord> records;  // one per state, starting with n = 0
  std::optional<std::string> failure;
};

using StepObserver = std::function<void(const WaveState&)>;

/// Marches `steps` steps from `initial`; the observer sees every state
/// including the initial one. A failing step ends the run early and is
/// described in `failure`.
RunResult run(const SteppingSystem& sys, WaveState initial, int steps, const LoadIntegrator& load,
              const StepObserver& observer = {});

/// One trajectory per load, all reusing the factorization of `sys`.
std::vector<RunResult> run_many(const SteppingSystem& sys, const WaveState& initial, int steps,
                                const std::vector<LoadIntegrator>& loads);

}  // namespace harmwave
