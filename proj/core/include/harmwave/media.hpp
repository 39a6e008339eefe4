#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "harmwave/mesh.hpp"

namespace harmwave {

/// Multiscale trigonometric conductivity: the average of five quotients of
/// shifted sines/cosines with periods 1/5, 1/13, 1/17, 1/31, 1/65 plus
/// sin(4x^2y^2) + 1. Strictly positive on the plane.
double eval_trig(Point p);

/// Axis-aligned rectangle, closed on all sides.
struct Strip {
  double x_min = -0.8;
  double x_max = 0.8;
  double y_min = 0.0;
  double y_max = 1.0 / 16.0;

  bool contains(Point p) const noexcept {
    return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
  }
};

enum class MediumKind { constant, trigonometric, channel, percolation, layered };

std::string to_string(MediumKind kind);

/// Identifier of the random generator behind percolation media. Every site
/// draws one std::mt19937_64 output in row-major order and takes the high bit.
inline constexpr const char* kPercolationRng = "mt19937_64-msb";
inline constexpr int kPercolationSites = 64;
inline constexpr std::uint64_t kDefaultPercolationSeed = 20080101;

/// Pointwise scalar conductivity a(x, y). Immutable value type.
class Medium {
 public:
  static Medium constant(double value);
  static Medium trigonometric();
  /// a = contrast inside the strip and 1 elsewhere; contrast must be >= 1.
  static Medium channel(double contrast, Strip strip = {});
  /// sites x sites checkerboard of values gamma or 1/gamma; gamma must be > 1.
  static Medium percolation(std::uint64_t seed, double gamma, int sites = kPercolationSites);
  /// Piecewise constant in x: values[k] on [breaks[k-1], breaks[k]), with
  /// breaks.size() + 1 == values.size().
  static Medium layered(std::vector<double> breaks, std::vector<double> values);

  MediumKind kind() const noexcept { return kind_; }
  double operator()(Point p) const;

  /// Percolation site values in row-major order (empty for other kinds).
  const std::vector<double>& sites() const noexcept { return sites_; }
  int site_count_per_side() const noexcept { return site_side_; }

  /// One-line human-readable description, including the RNG for percolation.
  std::string describe() const;

 private:
  MediumKind kind_ = MediumKind::constant;
  double value_ = 1.0;
  Strip strip_{};
  std::uint64_t seed_ = 0;
  int site_side_ = 0;
  std::vector<double> sites_;
  std::vector<double> breaks_;
  std::vector<double> values_;
};

/// Per-element coefficients on one mesh. `values[e]` is the scalar a on
/// element e; if `tensors` is set it overrides `values` with a symmetric
/// positive definite 2x2 matrix per element. `bulk` is the scalar K.
struct CoefficientField {
  std::vector<double> values;
  std::optional<std::vector<Eigen::Matrix2d>> tensors;
  double bulk = 1.0;

  std::size_t size() const noexcept { return values.size(); }
  Eigen::Matrix2d tensor(std::size_t e) const {
    return tensors ? (*tensors)[e] : Eigen::Matrix2d(values[e] * Eigen::Matrix2d::Identity());
  }
};

/// Samples `medium` at every triangle centroid.
CoefficientField sample_to_elements(const TriMesh& mesh, const Medium& medium, double bulk = 1.0);

/// Field dump: one `e a_e` line per element.
void write_field(std::ostream& out, const CoefficientField& field);

enum class SourceKind { zero, constant_one, traveling_sine, gaussian, modulated_gaussian };

std::string to_string(SourceKind kind);

/// One separable piece time(t) * space(x, y) of a source term.
struct SeparableTerm {
  std::function<double(double)> time;
  std::function<double(Point)> space;
};

/// Source g(x, y, t), stored as a sum of separable terms.
class SourceTerm {
 public:
  static SourceTerm zero();
  static SourceTerm constant_one();
  /// sin(2.4x - 1.8y + 2 pi t).
  static SourceTerm traveling_sine();
  /// Normalized Gaussian bump exp(-|p - c|^2 / (2 s^2)) / sqrt(2 pi s^2).
  static SourceTerm gaussian(double sigma = 0.05, Point center = {0.0, 0.15});
  /// Gaussian at the origin times modulation_t1(t) * modulation_t2(t).
  static SourceTerm modulated_gaussian(double sigma = 0.05);

  SourceKind kind() const noexcept { return kind_; }
  const std::vector<SeparableTerm>& terms() const noexcept { return terms_; }
  double operator()(Point p, double t) const;

 private:
  SourceKind kind_ = SourceKind::zero;
  std::vector<SeparableTerm> terms_;
};

/// Truncated square-wave series sum_{k=1}^{10} 2(1-(-1)^k)/(k pi) sin(2 k pi t).
double modulation_t1(double t);
/// erfc(8 (t - 0.5)).
double modulation_t2(double t);
double gaussian_bump(Point p, Point center, double sigma);

}  // namespace harmwave
