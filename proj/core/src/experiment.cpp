#include "harmwave/experiment.hpp"

#include <chrono>
#include <ostream>
#include <sstream>

#include "harmwave/errors.hpp"

namespace harmwave {
namespace {

using Clock = std::chrono::steady_clock;

/// Runs `body`, prefixing any library error with the stage name.
template <typename F>
auto staged(const char* stage, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const SolverError& err) {
    throw SolverError(std::string("[") + stage + "] " + err.what(), err.residual(), err.iterations());
  } catch (const CapacityError& err) {
    throw CapacityError(std::string("[") + stage + "] " + err.what());
  } catch (const ConfigError& err) {
    throw ConfigError(std::string("[") + stage + "] " + err.what());
  } catch (const UndefinedErrorMetric& err) {
    throw UndefinedErrorMetric(std::string("[") + stage + "] " + err.what());
  } catch (const Error& err) {
    throw Error(std::string("[") + stage + "] " + err.what());
  }
}

class StageTimer {
 public:
  explicit StageTimer(std::vector<std::pair<std::string, double>>& sink) : sink_(sink) {}
  template <typename F>
  auto operator()(const char* stage, F&& body) -> decltype(body()) {
    const auto start = Clock::now();
    struct Record {
      StageTimer* self;
      const char* stage;
      Clock::time_point start;
      ~Record() {
        self->sink_.emplace_back(stage, std::chrono::duration<double>(Clock::now() - start).count());
      }
    } record{this, stage, start};
    return staged(stage, std::forward<F>(body));
  }

 private:
  std::vector<std::pair<std::string, double>>& sink_;
};

std::string fine_key(const ExperimentConfig& c) {
  std::ostringstream key;
  key.precision(17);
  key << c.make_medium().describe() << "|L" << c.fine_level << '|' << to_string(c.bc);
  if (c.medium == MediumKind::layered) {
    for (double b : c.layer_breaks) key << ',' << b;
    for (double v : c.layer_values) key << ';' << v;
  }
  return key.str();
}

std::string map_key(const ExperimentConfig& c) {
  std::ostringstream key;
  key.precision(17);
  key << fine_key(c) << "|htol" << c.harmonic_tol;
  return key.str();
}

int series_stride(const ExperimentConfig& c) {
  if (c.ref_steps % c.steps != 0) {
    throw ConfigError("error series needs ref_steps to be a multiple of steps");
  }
  return c.ref_steps / c.steps;
}

std::string reference_key(const ExperimentConfig& c) {
  std::ostringstream key;
  key.precision(17);
  key << fine_key(c) << '|' << to_string(c.source) << "|T" << c.final_time << "|M" << c.ref_steps
      << "|tol" << c.solver_tol;
  if (c.error_series) key << "|series" << c.steps;
  return key.str();
}

WaveState zero_state(Index size) {
  WaveState s;
  s.v = Vector::Zero(size);
  s.p = Vector::Zero(size);
  return s;
}

SolverOptions solver_options(const ExperimentConfig& c) {
  SolverOptions options;
  options.rel_tol = c.solver_tol;
  return options;
}

}  // namespace

const FineProblem& ExperimentRunner::fine_problem(const ExperimentConfig& config) {
  const std::string key = fine_key(config);
  if (auto it = fine_.find(key); it != fine_.end()) return *it->second;
  auto fine = std::make_unique<FineProblem>();
  staged("assembly", [&] {
    fine->mesh = TriMesh::structured(config.fine_level);
    const Medium medium = config.make_medium();
    fine->medium = medium.describe();
    fine->field = sample_to_elements(fine->mesh, medium);
    fine->dofs = DofMap(fine->mesh, config.bc);
    fine->stiffness = assemble(fine->mesh, stiffness_matrices(fine->mesh, fine->field), fine->dofs).matrix;
    fine->mass = assemble(fine->mesh, mass_matrices(fine->mesh, 1.0 / fine->field.bulk), fine->dofs).matrix;
  });
  return *fine_.emplace(key, std::move(fine)).first->second;
}

const HarmonicMap& ExperimentRunner::harmonic_map(const ExperimentConfig& config) {
  const std::string key = map_key(config);
  if (auto it = maps_.find(key); it != maps_.end()) return *it->second;
  const FineProblem& fine = fine_problem(config);
  SolverOptions options;
  options.rel_tol = config.harmonic_tol;
  auto map = staged("harmonic", [&] {
    return std::make_unique<HarmonicMap>(solve_harmonic(fine.mesh, fine.field, options));
  });
  return *maps_.emplace(key, std::move(map)).first->second;
}

CoarseProblem ExperimentRunner::coarse_problem(const ExperimentConfig& config) {
  const FineProblem& fine = fine_problem(config);
  CoarseBasis basis = staged("basis", [&] {
    return CoarseBasis::build(config.basis, config.coarse_level, config.bc);
  });
  RepresentationMatrix r;
  if (config.basis == BasisKind::lfem) {
    r = staged("basis", [&] {
      SolverOptions options;
      options.rel_tol = config.harmonic_tol;
      return lfem_representation(basis, fine.mesh, fine.field, fine.dofs, options);
    });
  } else {
    const HarmonicMap& map = harmonic_map(config);
    r = staged("basis", [&] { return representation(basis, map, fine.mesh, fine.dofs); });
  }
  CoarseOperators ops = staged("operators", [&] {
    return project_operators(r, fine.stiffness, fine.mass);
  });
  return {std::move(basis), std::move(r), std::move(ops)};
}

const ReferenceRun& ExperimentRunner::reference(const ExperimentConfig& config) {
  const std::string key = reference_key(config);
  if (auto it = references_.find(key); it != references_.end()) return *it->second;
  const FineProblem& fine = fine_problem(config);
  auto ref = std::make_unique<ReferenceRun>();
  staged("reference", [&] {
    const SteppingSystem sys(fine.mass, fine.stiffness, config.final_time / config.ref_steps,
                             solver_options(config));
    const LoadIntegrator load = make_load(config.make_source(), fine.mesh, fine.dofs);
    StepObserver observer;
    if (config.error_series) {
      const int stride = series_stride(config);
      observer = [&, stride](const WaveState& s) {
        if (s.n % stride == 0) ref->snapshots.push_back(s.v);
      };
    }
    RunResult result = harmwave::run(sys, zero_state(fine.dofs.size()), config.ref_steps, load, observer);
    if (result.failure) throw SolverError(*result.failure);
    ref->final_state = std::move(result.final_state);
  });
  return *references_.emplace(key, std::move(ref)).first->second;
}

RunResult ExperimentRunner::coarse_run(const ExperimentConfig& config, const CoarseProblem& coarse,
                                       int steps, const StepObserver& observer) {
  const FineProblem& fine = fine_problem(config);
  return staged("coarse", [&] {
    const SteppingSystem sys(coarse.ops.mass, coarse.ops.stiffness, config.final_time / steps,
                             solver_options(config));
    const LoadIntegrator load = make_load(config.make_source(), fine.mesh, fine.dofs, &coarse.r);
    RunResult result = harmwave::run(sys, zero_state(coarse.ops.size()), steps, load, observer);
    if (result.failure) throw SolverError(*result.failure);
    return result;
  });
}

ErrorReport ExperimentRunner::run(const ExperimentConfig& config) {
  staged("config", [&] { config.validate(); });
  ErrorReport report;
  report.config = config;
  StageTimer timed(report.timings);

  const FineProblem& fine = timed("assembly", [&]() -> const FineProblem& { return fine_problem(config); });
  report.medium = fine.medium;
  report.dof_f = fine.dofs.size();

  if (config.basis != BasisKind::lfem) {
    const HarmonicMap& map = timed("harmonic", [&]() -> const HarmonicMap& { return harmonic_map(config); });
    report.diagnostics = map.diagnostics;
    report.warnings.insert(report.warnings.end(), map.warnings.begin(), map.warnings.end());
  }

  const CoarseProblem coarse = timed("coarse_space", [&] { return coarse_problem(config); });
  report.dof_c = coarse.basis.coarse_mesh().num_interior_vertices();
  report.basis_size = coarse.ops.size();

  const ReferenceRun& ref = timed("reference", [&]() -> const ReferenceRun& { return reference(config); });

  std::vector<Vector> coarse_states;
  StepObserver observer;
  if (config.error_series) {
    observer = [&](const WaveState& s) { coarse_states.push_back(s.v); };
  }
  const RunResult result = timed("coarse", [&] { return coarse_run(config, coarse, config.steps, observer); });

  timed("errors", [&] {
    report.errors = relative_errors(prolong(coarse.r, result.final_state.v), ref.final_state.v,
                                    fine.mesh, fine.dofs);
    report.series.reserve(result.records.size());
    for (std::size_t k = 0; k < result.records.size(); ++k) {
      const StepRecord& rec = result.records[k];
      SeriesRow row{rec.n, rec.t, rec.energy, std::nullopt};
      if (config.error_series && k < ref.snapshots.size()) {
        const Vector& u = ref.snapshots[k];
        if (u.squaredNorm() > 0.0) {
          row.errors = relative_errors(prolong(coarse.r, coarse_states[k]), u, fine.mesh, fine.dofs);
        }
      }
      report.series.push_back(row);
    }
  });
  return report;
}

ErrorReport run_experiment(const ExperimentConfig& config) {
  ExperimentRunner runner;
  return runner.run(config);
}

void write_table_row(std::ostream& out, const ErrorReport& report) {
  const auto old = out.precision(6);
  out << report.dof_f << ',' << report.dof_c << ',' << report.errors.l1 << ',' << report.errors.linf
      << ',' << report.errors.l2 << ',' << report.errors.h1 << '\n';
  out.precision(old);
}

std::vector<ErrorReport> run_table(const std::vector<ExperimentConfig>& configs, std::ostream& csv,
                                   ExperimentRunner* runner) {
  ExperimentRunner local;
  ExperimentRunner& r = runner ? *runner : local;
  csv << kTableHeader << '\n' << std::flush;
  std::vector<ErrorReport> reports;
  reports.reserve(configs.size());
  for (const ExperimentConfig& config : configs) {
    reports.push_back(r.run(config));
    write_table_row(csv, reports.back());
    csv.flush();
  }
  return reports;
}

void write_series(std::ostream& out, const ErrorReport& report) {
  const bool with_errors = report.config.error_series;
  out << "n,t,energy";
  if (with_errors) out << ",error_L1,error_L2,error_Linf,error_H1";
  out << '\n';
  out.precision(10);
  for (const SeriesRow& row : report.series) {
    out << row.n << ',' << row.t << ',' << row.energy;
    if (with_errors) {
      if (row.errors) {
        out << ',' << row.errors->l1 << ',' << row.errors->l2 << ',' << row.errors->linf << ','
            << row.errors->h1;
      } else {
        out << ",,,,";
      }
    }
    out << '\n';
  }
}

DtStudy dt_study(const ExperimentConfig& config, int halvings, ExperimentRunner* runner) {
  staged("config", [&] { config.validate(); });
  if (halvings < 1) throw ConfigError("dt study needs at least one halving");
  ExperimentRunner local;
  ExperimentRunner& r = runner ? *runner : local;
  const FineProblem& fine = r.fine_problem(config);
  const CoarseProblem coarse = r.coarse_problem(config);

  DtStudy study;
  std::vector<Vector> finals;
  for (int k = 0; k <= halvings + 1; ++k) {
    const int steps = config.steps << k;
    study.steps.push_back(steps);
    finals.push_back(prolong(coarse.r, r.coarse_run(config, coarse, steps).final_state.v));
  }
  for (std::size_t k = 0; k + 1 < finals.size(); ++k) {
    const double ref = discrete_norm(finals[k + 1], Norm::L2, fine.mesh, fine.dofs);
    if (!(ref > 0.0)) throw UndefinedErrorMetric("dt study: zero solution");
    study.differences.push_back(discrete_norm(finals[k] - finals[k + 1], Norm::L2, fine.mesh, fine.dofs) / ref);
  }
  for (std::size_t k = 0; k + 1 < study.differences.size(); ++k) {
    study.ratios.push_back(study.differences[k] / study.differences[k + 1]);
  }
  return study;
}

void write_dt_study(std::ostream& out, const DtStudy& study) {
  out << "steps,difference,ratio\n";
  out.precision(8);
  for (std::size_t k = 0; k < study.steps.size(); ++k) {
    out << study.steps[k] << ',';
    if (k < study.differences.size()) out << study.differences[k];
    out << ',';
    if (k > 0 && k - 1 < study.ratios.size()) out << study.ratios[k - 1];
    out << '\n';
  }
}

}  // namespace harmwave
