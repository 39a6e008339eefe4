#pragma once

#include <Eigen/Core>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "harmwave/media.hpp"
#include "harmwave/mesh.hpp"
#include "harmwave/solver.hpp"

namespace harmwave {

/// Cordes-type diagnostics of sigma = grad(F)^T a grad(F), element-wise.
struct CordesReport {
  /// max over elements of lambda_max(sigma) / lambda_min(sigma); +inf if some
  /// sigma is singular.
  double mu_sigma = 1.0;
  /// min over elements of trace(sigma).
  double inf_trace = 0.0;
  /// min over elements of det(grad F).
  double min_det_jac = 0.0;
  /// Element attaining mu_sigma.
  Index worst_element = -1;
};

struct InvertibilityReport {
  Index violations = 0;  // elements with det(grad F) <= 0
  double min_det = 0.0;
};

/// Discrete harmonic coordinates F = (F1, F2) on a fine mesh, with
/// element-wise Jacobians and sigma.
struct HarmonicMap {
  Vector f1;  // nodal, all vertices
  Vector f2;
  std::vector<Eigen::Matrix2d> jac;    // jac[e](k, d) = d F_k / d x_d
  std::vector<Eigen::Matrix2d> sigma;  // jac^T a jac
  CordesReport diagnostics;
  SolveStats stats[2];
  std::vector<std::string> warnings;

  Point operator()(Index vertex) const { return {f1[vertex], f2[vertex]}; }
};

/// Solves div(a grad F_k) = 0 with F_k = x_k on the boundary for k = 1, 2,
/// sharing one factorization between both components. A non-invertible
/// result (some det grad F <= 0) is reported in `warnings`, never thrown.
HarmonicMap solve_harmonic(const TriMesh& mesh, const CoefficientField& field,
                           const SolverOptions& options = {});

/// Same discrete problem with arbitrary boundary data F = g on the boundary.
HarmonicMap harmonic_extension(const TriMesh& mesh, const CoefficientField& field,
                               const std::function<Point(Point)>& boundary,
                               const SolverOptions& options = {});

/// The identity map F(x) = x on `mesh` with geometry filled in for `field`.
HarmonicMap identity_map(const TriMesh& mesh, const CoefficientField& field);

/// Recomputes jac, sigma and diagnostics from the nodal values f1, f2.
void update_geometry(HarmonicMap& map, const TriMesh& mesh, const CoefficientField& field);

/// Observational only: never throws on a degenerate map.
CordesReport cordes_report(const HarmonicMap& map);

/// Per-element anisotropy ratio lambda_max / lambda_min of sigma.
double anisotropy_ratio(const Eigen::Matrix2d& sigma);

InvertibilityReport check_invertibility(const HarmonicMap& map, const TriMesh& mesh);

/// `x y F1 F2` per vertex.
void write_harmonic(std::ostream& out, const TriMesh& mesh, const HarmonicMap& map);
/// `mu_sigma=... inf_trace=... min_det=...`
std::string summary_line(const CordesReport& report);

}  // namespace harmwave
