#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "harmwave/coarse_space.hpp"
#include "harmwave/config.hpp"
#include "harmwave/harmonic.hpp"
#include "harmwave/norms.hpp"
#include "harmwave/wave.hpp"

namespace harmwave {

struct SeriesRow {
  int n = 0;
  double t = 0.0;
  double energy = 0.0;
  std::optional<NormSet> errors;
};

struct ErrorReport {
  ExperimentConfig config;
  Index dof_f = 0;
  /// Coarse mesh label: interior nodes of the coarse grid, (2^Lc - 1)^2,
  /// whatever the basis. The actual number of basis functions is basis_size.
  Index dof_c = 0;
  Index basis_size = 0;
  /// Relative errors of the coarse solution at the final time.
  NormSet errors;
  std::vector<SeriesRow> series;
  std::optional<CordesReport> diagnostics;  // absent for LFEM
  std::vector<std::string> warnings;
  std::vector<std::pair<std::string, double>> timings;  // seconds per stage
  std::string medium;
};

/// Everything that depends only on (medium, fine level, boundary condition).
struct FineProblem {
  TriMesh mesh;
  CoefficientField field;
  DofMap dofs;
  SparseMatrix stiffness;
  SparseMatrix mass;
  std::string medium;
};

struct CoarseProblem {
  CoarseBasis basis;
  RepresentationMatrix r;
  CoarseOperators ops;
};

struct ReferenceRun {
  WaveState final_state;
  /// Fine solutions at the coarse step times when a series was requested.
  std::vector<Vector> snapshots;
};

/// Runs experiments while caching fine artifacts (mesh, assembled matrices,
/// harmonic map, reference trajectories) across configurations that share
/// them. Stage failures are rethrown with the stage name prefixed, keeping
/// their error type.
class ExperimentRunner {
 public:
  ErrorReport run(const ExperimentConfig& config);

  const FineProblem& fine_problem(const ExperimentConfig& config);
  const HarmonicMap& harmonic_map(const ExperimentConfig& config);
  CoarseProblem coarse_problem(const ExperimentConfig& config);
  const ReferenceRun& reference(const ExperimentConfig& config);

  /// Coarse trajectory with `steps` steps for the given coarse problem.
  RunResult coarse_run(const ExperimentConfig& config, const CoarseProblem& coarse, int steps,
                       const StepObserver& observer = {});

 private:
  std::map<std::string, std::unique_ptr<FineProblem>> fine_;
  std::map<std::string, std::unique_ptr<HarmonicMap>> maps_;
  std::map<std::string, std::unique_ptr<ReferenceRun>> references_;
};

/// One experiment with a fresh runner.
ErrorReport run_experiment(const ExperimentConfig& config);

inline constexpr const char* kTableHeader = "dof_f,dof_c,L1,Linf,L2,H1";

void write_table_row(std::ostream& out, const ErrorReport& report);

/// Runs every config with one shared runner, writing the header and one row
/// per finished experiment (flushed immediately, so partial results survive
/// a failure, which is then rethrown).
std::vector<ErrorReport> run_table(const std::vector<ExperimentConfig>& configs, std::ostream& csv,
                                   ExperimentRunner* runner = nullptr);

/// Observer CSV: `n,t,energy[,error_L1,error_L2,error_Linf,error_H1]`.
void write_series(std::ostream& out, const ErrorReport& report);

/// Self-convergence in time on a fixed coarse space: coarse runs with
/// steps * 2^k, k = 0..halvings+1, differences d_k between consecutive runs
/// (relative L2 on the fine mesh) and ratios d_k / d_{k+1}.
struct DtStudy {
  std::vector<int> steps;
  std::vector<double> differences;
  std::vector<double> ratios;
};

DtStudy dt_study(const ExperimentConfig& config, int halvings, ExperimentRunner* runner = nullptr);

void write_dt_study(std::ostream& out, const DtStudy& study);

}  // namespace harmwave
