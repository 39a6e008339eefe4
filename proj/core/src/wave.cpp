#include "harmwave/wave.hpp"

#include <cmath>
#include <string>

#include "harmwave/errors.hpp"

namespace harmwave {

LoadIntegrator::LoadIntegrator(Index size, std::vector<std::function<double(double)>> time,
                               std::vector<Vector> space)
    : size_(size), time_(std::move(time)), space_(std::move(space)) {
  if (time_.size() != space_.size()) throw ConfigError("load integrator: term count mismatch");
  for (const Vector& s : space_) {
    if (s.size() != size_) throw ConfigError("load integrator: spatial vector has wrong length");
  }
}

Vector LoadIntegrator::integrate(double t0, double t1) const {
  Vector out = Vector::Zero(size_);
  const double half = 0.5 * (t1 - t0);
  const double mid = 0.5 * (t1 + t0);
  const double offset = half / std::sqrt(3.0);
  for (std::size_t k = 0; k < space_.size(); ++k) {
    const double weight = half * (time_[k](mid - offset) + time_[k](mid + offset));
    out += weight * space_[k];
  }
  return out;
}

LoadIntegrator LoadIntegrator::scaled(double factor) const {
  LoadIntegrator out = *this;
  for (Vector& s : out.space_) s *= factor;
  return out;
}

LoadIntegrator make_load(const SourceTerm& source, const TriMesh& fine, const DofMap& fine_dofs,
                         const RepresentationMatrix* r) {
  const Index size = r ? static_cast<Index>(r->cols()) : fine_dofs.size();
  std::vector<std::function<double(double)>> time;
  std::vector<Vector> space;
  for (const SeparableTerm& term : source.terms()) {
    Vector load = load_vector(fine, fine_dofs, term.space);
    if (r) load = project_load(*r, load);
    time.push_back(term.time);
    space.push_back(std::move(load));
  }
  return LoadIntegrator(size, std::move(time), std::move(space));
}

SpdSolver SteppingSystem::factorize(const SparseMatrix& mass, const SparseMatrix& stiffness,
                                    double dt, const SolverOptions& options) {
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  if (mass.rows() != stiffness.rows() || mass.cols() != stiffness.cols()) {
    throw ConfigError("mass and stiffness differ in dimension");
  }
  const SparseMatrix s = mass + (0.5 * dt * dt) * stiffness;
  return SpdSolver(s, options);
}

SteppingSystem::SteppingSystem(SparseMatrix mass, SparseMatrix stiffness, double dt,
                               SolverOptions options)
    : mass_(std::move(mass)),
      stiffness_(std::move(stiffness)),
      dt_(dt),
      options_(options),
      solver_(factorize(mass_, stiffness_, dt, options)) {}

void SteppingSystem::set_dt(double dt) {
  if (dt == dt_) return;
  solver_ = factorize(mass_, stiffness_, dt, options_);
  dt_ = dt;
  ++factorizations_;
}

WaveState init_state(const Vector& u0_fine, const Vector& v0_fine, const RepresentationMatrix& r,
                     const SparseMatrix& fine_stiffness, const CoarseOperators& ops,
                     const SolverOptions& options) {
  WaveState state;
  state.v = ritz_project(u0_fine, r, fine_stiffness, ops, options);
  state.p = ritz_project(v0_fine, r, fine_stiffness, ops, options);
  return state;
}

WaveState step(const WaveState& state, const SteppingSystem& sys, const Vector& load_integral) {
  if (state.v.size() != sys.size() || state.p.size() != sys.size() ||
      load_integral.size() != sys.size()) {
    throw ConfigError("step: state, load and system dimensions disagree");
  }
  const double dt = sys.dt();
  const Vector rhs = sys.mass() * state.p - dt * (sys.stiffness() * state.v) + load_integral;
  WaveState next;
  try {
    next.p = sys.solver().solve(rhs);
  } catch (const SolverError& err) {
    throw SolverError("step " + std::to_string(state.n) + ": " + err.what(), err.residual(),
                      err.iterations());
  }
  next.v = state.v + dt * next.p;
  next.n = state.n + 1;
  next.t = next.n * dt;
  return next;
}

double energy(const WaveState& state, const SparseMatrix& mass, const SparseMatrix& stiffness) {
  return state.p.dot(mass * state.p) + state.v.dot(stiffness * state.v);
}

RunResult run(const SteppingSystem& sys, WaveState initial, int steps, const LoadIntegrator& load,
              const StepObserver& observer) {
  if (steps < 1) throw ConfigError("run needs at least one step");
  if (load.size() != sys.size()) throw ConfigError("run: load and system dimensions disagree");
  RunResult result;
  result.records.reserve(static_cast<std::size_t>(steps) + 1);
  WaveState state = std::move(initial);
  auto record = [&](const WaveState& s) {
    result.records.push_back({s.n, s.t, energy(s, sys.mass(), sys.stiffness())});
    if (observer) observer(s);
  };
  record(state);
  const Vector zero = Vector::Zero(sys.size());
  for (int k = 0; k < steps; ++k) {
    const double t0 = state.n * sys.dt();
    const double t1 = (state.n + 1) * sys.dt();
    try {
      state = step(state, sys, load.is_zero() ? zero : load.integrate(t0, t1));
    } catch (const SolverError& err) {
      result.failure = err.what();
      break;
    }
    record(state);
  }
  result.final_state = std::move(state);
  return result;
}

std::vector<RunResult> run_many(const SteppingSystem& sys, const WaveState& initial, int steps,
                                const std::vector<LoadIntegrator>& loads) {
  std::vector<RunResult> out;
  out.reserve(loads.size());
  for (const LoadIntegrator& load : loads) out.push_back(run(sys, initial, steps, load));
  return out;
}

}  // namespace harmwave
