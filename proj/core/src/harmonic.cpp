#include "harmwave/harmonic.hpp"

#include <Eigen/LU>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "harmwave/errors.hpp"
#include "harmwave/fem.hpp"

namespace harmwave {

double anisotropy_ratio(const Eigen::Matrix2d& sigma) {
  // Closed form for a symmetric 2x2 matrix.
  const double half_trace = 0.5 * (sigma(0, 0) + sigma(1, 1));
  const double half_diff = 0.5 * (sigma(0, 0) - sigma(1, 1));
  const double off = 0.5 * (sigma(0, 1) + sigma(1, 0));
  const double radius = std::hypot(half_diff, off);
  const double lmax = half_trace + radius;
  const double lmin = half_trace - radius;
  if (!(lmin > 0.0)) return std::numeric_limits<double>::infinity();
  return lmax / lmin;
}

CordesReport cordes_report(const HarmonicMap& map) {
  CordesReport report;
  report.mu_sigma = 0.0;
  report.inf_trace = std::numeric_limits<double>::infinity();
  report.min_det_jac = std::numeric_limits<double>::infinity();
  for (std::size_t e = 0; e < map.sigma.size(); ++e) {
    const double ratio = anisotropy_ratio(map.sigma[e]);
    if (ratio > report.mu_sigma || report.worst_element < 0) {
      report.mu_sigma = ratio;
      report.worst_element = static_cast<Index>(e);
    }
    report.inf_trace = std::min(report.inf_trace, map.sigma[e].trace());
    report.min_det_jac = std::min(report.min_det_jac, map.jac[e].determinant());
  }
  return report;
}

void update_geometry(HarmonicMap& map, const TriMesh& mesh, const CoefficientField& field) {
  if (map.f1.size() != mesh.num_vertices() || map.f2.size() != mesh.num_vertices()) {
    throw ConfigError("harmonic map does not match the mesh");
  }
  if (field.size() != static_cast<std::size_t>(mesh.num_triangles())) {
    throw ConfigError("coefficient field does not match the mesh");
  }
  const auto n = static_cast<std::size_t>(mesh.num_triangles());
  map.jac.resize(n);
  map.sigma.resize(n);
  for (Index e = 0; e < mesh.num_triangles(); ++e) {
    const Eigen::Matrix<double, 3, 2> grads = barycentric_gradients(mesh.corners(e));
    const Triangle& tri = mesh.triangles()[e];
    Eigen::Matrix<double, 2, 3> values;
    for (int i = 0; i < 3; ++i) {
      values(0, i) = map.f1[tri[i]];
      values(1, i) = map.f2[tri[i]];
    }
    const Eigen::Matrix2d jac = values * grads;
    map.jac[e] = jac;
    map.sigma[e] = jac.transpose() * field.tensor(e) * jac;
  }
  map.diagnostics = cordes_report(map);
  map.warnings.clear();
  const InvertibilityReport inv = check_invertibility(map, mesh);
  if (inv.violations > 0) {
    std::ostringstream msg;
    msg << "harmonic map is not invertible on " << inv.violations
        << " element(s); min det grad F = " << inv.min_det;
    map.warnings.push_back(msg.str());
  }
}

HarmonicMap identity_map(const TriMesh& mesh, const CoefficientField& field) {
  HarmonicMap map;
  map.f1.resize(mesh.num_vertices());
  map.f2.resize(mesh.num_vertices());
  for (Index v = 0; v < mesh.num_vertices(); ++v) {
    map.f1[v] = mesh.vertices()[v].x;
    map.f2[v] = mesh.vertices()[v].y;
  }
  update_geometry(map, mesh, field);
  return map;
}

HarmonicMap solve_harmonic(const TriMesh& mesh, const CoefficientField& field,
                           const SolverOptions& options) {
  return harmonic_extension(mesh, field, [](Point p) { return p; }, options);
}

HarmonicMap harmonic_extension(const TriMesh& mesh, const CoefficientField& field,
                               const std::function<Point(Point)>& boundary,
                               const SolverOptions& options) {
  const auto elements = stiffness_matrices(mesh, field);
  const SparseMatrix full = assemble_full(mesh, elements);
  const DofMap dofs(mesh, Boundary::dirichlet);

  // Split the full matrix into interior-interior and interior-boundary blocks.
  std::vector<Point> data(static_cast<std::size_t>(mesh.num_vertices()));
  for (Index v = 0; v < mesh.num_vertices(); ++v) {
    data[v] = mesh.on_boundary(v) ? boundary(mesh.vertices()[v]) : mesh.vertices()[v];
  }
  std::vector<Eigen::Triplet<double, Index>> inner;
  Vector lift1 = Vector::Zero(dofs.size());
  Vector lift2 = Vector::Zero(dofs.size());
  for (Index col = 0; col < full.outerSize(); ++col) {
    const Index dc = dofs.dof(col);
    const Point& pc = data[col];
    for (SparseMatrix::InnerIterator it(full, col); it; ++it) {
      const Index dr = dofs.dof(static_cast<Index>(it.row()));
      if (dr < 0) continue;
      if (dc >= 0) {
        inner.emplace_back(dr, dc, it.value());
      } else {
        lift1[dr] -= it.value() * pc.x;
        lift2[dr] -= it.value() * pc.y;
      }
    }
  }
  SparseMatrix a_ii(dofs.size(), dofs.size());
  a_ii.setFromTriplets(inner.begin(), inner.end());

  HarmonicMap map;
  map.f1.resize(mesh.num_vertices());
  map.f2.resize(mesh.num_vertices());
  for (Index v = 0; v < mesh.num_vertices(); ++v) {
    map.f1[v] = data[v].x;
    map.f2[v] = data[v].y;
  }
  if (dofs.size() > 0) {
    const SpdSolver solver(a_ii, options);
    const Vector x1 = solver.solve(lift1, &map.stats[0]);
    const Vector x2 = solver.solve(lift2, &map.stats[1]);
    for (Index d = 0; d < dofs.size(); ++d) {
      map.f1[dofs.vertex(d)] = x1[d];
      map.f2[dofs.vertex(d)] = x2[d];
    }
  }
  update_geometry(map, mesh, field);
  return map;
}

InvertibilityReport check_invertibility(const HarmonicMap& map, const TriMesh& mesh) {
  InvertibilityReport report;
  report.min_det = std::numeric_limits<double>::infinity();
  if (map.jac.size() != static_cast<std::size_t>(mesh.num_triangles())) {
    throw ConfigError("harmonic map geometry does not match the mesh");
  }
  for (const Eigen::Matrix2d& jac : map.jac) {
    const double det = jac.determinant();
    report.min_det = std::min(report.min_det, det);
    if (!(det > 0.0)) ++report.violations;
  }
  return report;
}

void write_harmonic(std::ostream& out, const TriMesh& mesh, const HarmonicMap& map) {
  out.precision(17);
  for (Index v = 0; v < mesh.num_vertices(); ++v) {
    const Point& p = mesh.vertices()[v];
    out << p.x << ' ' << p.y << ' ' << map.f1[v] << ' ' << map.f2[v] << '\n';
  }
}

std::string summary_line(const CordesReport& report) {
  std::ostringstream out;
  out.precision(10);
  out << "mu_sigma=" << report.mu_sigma << " inf_trace=" << report.inf_trace
      << " min_det=" << report.min_det_jac;
  return out.str();
}

}  // namespace harmwave
