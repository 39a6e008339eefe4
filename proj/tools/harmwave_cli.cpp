// harmwave: command line front end for the homogenized wave solver.
//
//   harmwave harmonic --medium trig --fine_level 8 --out-dir out
//   harmwave run --config exp.cfg --coarse_level 3
//   harmwave table --levels 2,3,4 --out-dir out
//   harmwave dtstudy --halvings 3
//
// Exit codes: 0 success, 2 configuration error, 3 solver failure.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "harmwave/config.hpp"
#include "harmwave/errors.hpp"
#include "harmwave/experiment.hpp"
#include "harmwave/harmonic.hpp"

namespace fs = std::filesystem;
using namespace harmwave;

namespace {

constexpr int kConfigFailure = 2;
constexpr int kSolverFailure = 3;

struct Options {
  std::string config_file;
  std::map<std::string, std::string> overrides;
  std::string seed;
  std::string out_dir;
};

// One `--key` flag per config key; `T` gets a long spelling since CLI11
// reserves single letters for short flags.
void add_config_flags(CLI::App& cmd, Options& opts) {
  cmd.add_option("--config", opts.config_file, "flat key = value config file")->check(CLI::ExistingFile);
  cmd.add_option("--seed", opts.seed, "percolation seed (same as perc_seed)");
  cmd.add_option("--out-dir", opts.out_dir, "directory for output files");
  for (const auto& [key, value] : ExperimentConfig{}.to_key_values()) {
    if (key == "out_dir") continue;
    const std::string name = key == "T" ? "-T,--final_time" : "--" + key;
    cmd.add_option_function<std::string>(
           name, [&opts, key = key](const std::string& v) { opts.overrides[key] = v; },
           "config key '" + key + "' (default " + (value.empty() ? "none" : value) + ")")
        ->type_name("VALUE");
  }
}

ExperimentConfig load_config(const Options& opts) {
  ExperimentConfig config;
  if (!opts.config_file.empty()) {
    std::ifstream in(opts.config_file);
    if (!in) throw ConfigError("cannot read config file " + opts.config_file);
    config = parse_config(in);
  }
  for (const auto& [key, value] : opts.overrides) config.set(key, value);
  if (!opts.seed.empty()) config.set("perc_seed", opts.seed);
  if (!opts.out_dir.empty()) config.out_dir = opts.out_dir;
  config.validate();
  return config;
}

std::ofstream open_output(const ExperimentConfig& config, const std::string& name) {
  fs::create_directories(config.out_dir);
  const fs::path path = fs::path(config.out_dir) / name;
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

void save_config(const ExperimentConfig& config) {
  if (config.out_dir.empty()) return;
  std::ofstream out = open_output(config, "config.txt");
  write_config(out, config);
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

int cmd_harmonic(const ExperimentConfig& config) {
  ExperimentRunner runner;
  const FineProblem& fine = runner.fine_problem(config);
  const HarmonicMap& map = runner.harmonic_map(config);
  print_warnings(map.warnings);
  std::cout << summary_line(map.diagnostics) << '\n';
  if (!config.out_dir.empty()) {
    save_config(config);
    std::ofstream out = open_output(config, "harmonic.txt");
    write_harmonic(out, fine.mesh, map);
    std::ofstream field = open_output(config, "field.txt");
    write_field(field, fine.field);
  }
  return 0;
}

void write_report(std::ostream& out, const ErrorReport& report) {
  out << "medium " << report.medium << '\n';
  out << "basis " << to_string(report.config.basis) << '\n';
  out << "dof_f " << report.dof_f << '\n';
  out << "dof_c " << report.dof_c << '\n';
  out << "basis_size " << report.basis_size << '\n';
  out.precision(10);
  out << "L1 " << report.errors.l1 << "\nLinf " << report.errors.linf << "\nL2 " << report.errors.l2
      << "\nH1 " << report.errors.h1 << '\n';
  if (report.diagnostics) out << summary_line(*report.diagnostics) << '\n';
  for (const auto& w : report.warnings) out << "warning " << w << '\n';
  for (const auto& [stage, seconds] : report.timings) out << "time_" << stage << ' ' << seconds << '\n';
}

int cmd_run(const ExperimentConfig& config) {
  const ErrorReport report = run_experiment(config);
  print_warnings(report.warnings);
  std::cout << kTableHeader << '\n';
  write_table_row(std::cout, report);
  if (!config.out_dir.empty()) {
    save_config(config);
    std::ofstream table = open_output(config, "errors.csv");
    table << kTableHeader << '\n';
    write_table_row(table, report);
    std::ofstream series = open_output(config, "series.csv");
    write_series(series, report);
    std::ofstream summary = open_output(config, "report.txt");
    write_report(summary, report);
  }
  return 0;
}

int cmd_table(const ExperimentConfig& base, const std::vector<int>& levels) {
  std::vector<ExperimentConfig> configs;
  for (int level : levels) {
    ExperimentConfig c = base;
    c.coarse_level = level;
    c.validate();
    configs.push_back(c);
  }
  if (base.out_dir.empty()) {
    run_table(configs, std::cout);
    return 0;
  }
  save_config(base);
  std::ofstream csv = open_output(base, "table.csv");
  const auto reports = run_table(configs, csv);
  std::cout << kTableHeader << '\n';
  for (const auto& r : reports) write_table_row(std::cout, r);
  return 0;
}

int cmd_dtstudy(const ExperimentConfig& config, int halvings) {
  const DtStudy study = dt_study(config, halvings);
  write_dt_study(std::cout, study);
  if (!config.out_dir.empty()) {
    save_config(config);
    std::ofstream out = open_output(config, "dtstudy.csv");
    write_dt_study(out, study);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Harmonic-coordinate homogenization of the 2D acoustic wave equation"};
  app.require_subcommand(1);

  Options opts;
  CLI::App* harmonic = app.add_subcommand("harmonic", "harmonic coordinates and Cordes diagnostics");
  CLI::App* run = app.add_subcommand("run", "one experiment: coarse solve against a fine reference");
  CLI::App* table = app.add_subcommand("table", "sweep over coarse levels, CSV rows");
  CLI::App* dtstudy = app.add_subcommand("dtstudy", "time step halving study on a fixed coarse space");
  for (CLI::App* cmd : {harmonic, run, table, dtstudy}) add_config_flags(*cmd, opts);

  std::vector<int> levels{2, 3, 4};
  table->add_option("--levels", levels, "coarse levels to sweep")->delimiter(',');
  int halvings = 3;
  dtstudy->add_option("--halvings", halvings, "number of halvings beyond the first pair")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigFailure;
  }

  try {
    const ExperimentConfig config = load_config(opts);
    if (harmonic->parsed()) return cmd_harmonic(config);
    if (run->parsed()) return cmd_run(config);
    if (table->parsed()) return cmd_table(config, levels);
    if (dtstudy->parsed()) return cmd_dtstudy(config, halvings);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigFailure;
  } catch (const CapacityError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigFailure;
  } catch (const Error& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigFailure;
  }
  return 0;
}
