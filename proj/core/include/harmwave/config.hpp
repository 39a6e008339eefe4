#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "harmwave/coarse_space.hpp"
#include "harmwave/fem.hpp"
#include "harmwave/media.hpp"

namespace harmwave {

/// Every knob of one experiment. Keys of the flat `key = value` file format
/// are listed next to each field.
struct ExperimentConfig {
  MediumKind medium = MediumKind::trigonometric;  // medium = trig|channel|percolation|constant|layered
  double constant_a = 1.0;                         // const_a
  double channel_a = 100.0;                        // channel_A
  std::uint64_t perc_seed = kDefaultPercolationSeed;  // perc_seed (alias: seed)
  double perc_gamma = 10.0;                        // perc_gamma
  std::vector<double> layer_breaks{0.0};           // layer_breaks = comma list
  std::vector<double> layer_values{2.0, 1.0};      // layer_values = comma list
  SourceKind source = SourceKind::constant_one;    // source = one|sine|gauss|modulated|zero
  BasisKind basis = BasisKind::spline_composed;    // basis = lfem|lin|spline
  int coarse_level = 3;                            // coarse_level
  int fine_level = 8;                              // fine_level
  Boundary bc = Boundary::dirichlet;               // bc = dirichlet|neumann
  double final_time = 1.0;                         // T
  int steps = 500;                                 // steps
  int ref_steps = 500;                             // ref_steps
  double solver_tol = 1e-10;                       // tol
  double harmonic_tol = 1e-10;                     // harmonic_tol
  bool error_series = false;                       // series = true|false
  std::string out_dir;                             // out_dir

  /// Throws ConfigError when an invariant is violated.
  void validate() const;
  Medium make_medium() const;
  SourceTerm make_source() const;
  double dt() const { return final_time / steps; }

  /// Applies one key; throws ConfigError for unknown keys or bad values.
  void set(const std::string& key, const std::string& value);
  std::vector<std::pair<std::string, std::string>> to_key_values() const;
};

/// Reads `key = value` lines; `#` starts a comment, blank lines are skipped.
ExperimentConfig parse_config(std::istream& in, ExperimentConfig base = {});
void write_config(std::ostream& out, const ExperimentConfig& config);

MediumKind parse_medium(const std::string& text);
SourceKind parse_source(const std::string& text);
BasisKind parse_basis(const std::string& text);
Boundary parse_boundary(const std::string& text);

}  // namespace harmwave
