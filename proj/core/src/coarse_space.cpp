#include "harmwave/coarse_space.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "harmwave/errors.hpp"

namespace harmwave {
namespace {

using Triplets = std::vector<Eigen::Triplet<double, Index>>;

Point clamp_to_square(Point p) {
  return {std::clamp(p.x, -1.0, 1.0), std::clamp(p.y, -1.0, 1.0)};
}

constexpr double kOnEdge = 1e-12;

}  // namespace

std::string to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::lfem: return "lfem";
    case BasisKind::p1_composed: return "lin";
    case BasisKind::spline_composed: return "spline";
  }
  return "unknown";
}

double cubic_bspline(double s) {
  const double a = std::abs(s);
  if (a >= 2.0) return 0.0;
  if (a >= 1.0) {
    const double b = 2.0 - a;
    return b * b * b / 6.0;
  }
  return (4.0 - 6.0 * a * a + 3.0 * a * a * a) / 6.0;
}

CoarseBasis CoarseBasis::build(BasisKind kind, int level, Boundary bc) {
  if (level < 1) throw ConfigError("coarse level must be >= 1, got " + std::to_string(level));
  CoarseBasis basis;
  basis.kind_ = kind;
  basis.level_ = level;
  basis.bc_ = bc;
  basis.mesh_ = TriMesh::structured(level);
  basis.dofs_ = DofMap(basis.mesh_, bc);
  if (kind == BasisKind::spline_composed) {
    // Every spline whose support meets the open square: centers -1 .. n+1.
    basis.spline_first_ = -1;
    basis.spline_count_ = basis.mesh_.cells_per_side() + 3;
  }
  return basis;
}

Index CoarseBasis::size() const noexcept {
  if (kind_ == BasisKind::spline_composed) return spline_count_ * spline_count_;
  return dofs_.size();
}

double CoarseBasis::weight(Point p) const noexcept {
  if (kind_ != BasisKind::spline_composed || bc_ == Boundary::neumann) return 1.0;
  return (1.0 - p.x * p.x) * (1.0 - p.y * p.y);
}

std::vector<std::pair<Index, double>> CoarseBasis::nonzeros(Point p) const {
  p = clamp_to_square(p);
  std::vector<std::pair<Index, double>> out;
  if (kind_ != BasisKind::spline_composed) {
    const Index t = mesh_.locate(p);
    const auto lambda = mesh_.barycentric(t, p);
    const Triangle& tri = mesh_.triangles()[t];
    for (int k = 0; k < 3; ++k) {
      const Index d = dofs_.dof(tri[k]);
      const double value = std::clamp(lambda[k], 0.0, 1.0);
      if (d >= 0 && value > 0.0) out.emplace_back(d, value);
    }
    return out;
  }

  const double w = weight(p);
  if (w == 0.0) return out;
  const double h = mesh_.spacing();
  const double sx = (p.x + 1.0) / h;
  const double sy = (p.y + 1.0) / h;
  const auto fx = static_cast<Index>(std::floor(sx));
  const auto fy = static_cast<Index>(std::floor(sy));
  for (Index cy = fy - 1; cy <= fy + 2; ++cy) {
    const Index jy = cy - spline_first_;
    if (jy < 0 || jy >= spline_count_) continue;
    const double by = cubic_bspline(sy - cy);
    if (by == 0.0) continue;
    for (Index cx = fx - 1; cx <= fx + 2; ++cx) {
      const Index jx = cx - spline_first_;
      if (jx < 0 || jx >= spline_count_) continue;
      const double bx = cubic_bspline(sx - cx);
      if (bx == 0.0) continue;
      out.emplace_back(jy * spline_count_ + jx, w * bx * by);
    }
  }
  return out;
}

double CoarseBasis::operator()(Index i, Point p) const {
  if (i < 0 || i >= size()) throw ConfigError("basis index out of range");
  for (const auto& [index, value] : nonzeros(p)) {
    if (index == i) return value;
  }
  return 0.0;
}

RepresentationMatrix representation(const CoarseBasis& basis, const HarmonicMap& map,
                                    const TriMesh& fine, const DofMap& fine_dofs) {
  if (map.f1.size() != fine.num_vertices()) {
    throw ConfigError("representation: harmonic map does not live on the fine mesh");
  }
  Triplets entries;
  entries.reserve(static_cast<std::size_t>(fine_dofs.size()) * 4);
  for (Index j = 0; j < fine_dofs.size(); ++j) {
    const Index v = fine_dofs.vertex(j);
    for (const auto& [i, value] : basis.nonzeros(map(v))) entries.emplace_back(j, i, value);
  }
  RepresentationMatrix r(fine_dofs.size(), basis.size());
  r.setFromTriplets(entries.begin(), entries.end());
  r.makeCompressed();
  return r;
}

RepresentationMatrix lfem_representation(const CoarseBasis& basis, const TriMesh& fine,
                                         const CoefficientField& field, const DofMap& fine_dofs,
                                         const SolverOptions& options) {
  const TriMesh& coarse = basis.coarse_mesh();
  if (fine.level() < coarse.level()) {
    throw ConfigError("lfem: fine mesh must refine the coarse mesh");
  }
  if (field.size() != static_cast<std::size_t>(fine.num_triangles())) {
    throw ConfigError("lfem: coefficient field does not match the fine mesh");
  }

  std::vector<std::vector<Index>> cells(static_cast<std::size_t>(coarse.num_triangles()));
  for (Index e = 0; e < fine.num_triangles(); ++e) {
    cells[fine.ancestor(e, coarse.level())].push_back(e);
  }
  const auto elements = stiffness_matrices(fine, field);

  Triplets entries;
  entries.reserve(static_cast<std::size_t>(fine_dofs.size()) * 3);
  std::vector<Index> local_of(static_cast<std::size_t>(fine.num_vertices()), -1);
  std::vector<std::uint8_t> cell_interior(static_cast<std::size_t>(fine.num_vertices()), 0);

  for (Index k = 0; k < coarse.num_triangles(); ++k) {
    const Triangle& ktri = coarse.triangles()[k];

    // Local unknowns: fine vertices strictly inside K.
    std::vector<Index> unknowns;
    for (const Index e : cells[k]) {
      for (const Index v : fine.triangles()[e]) {
        if (local_of[v] != -1) continue;
        const auto lambda = coarse.barycentric(k, fine.vertices()[v]);
        const bool inside = std::min({lambda[0], lambda[1], lambda[2]}) > kOnEdge;
        local_of[v] = inside ? static_cast<Index>(unknowns.size()) : -2;
        if (inside) unknowns.push_back(v);
      }
    }
    const auto n = static_cast<Index>(unknowns.size());

    if (n > 0) {
      Triplets local;
      Vector lift1 = Vector::Zero(n);
      Vector lift2 = Vector::Zero(n);
      for (const Index e : cells[k]) {
        const Triangle& tri = fine.triangles()[e];
        for (int a = 0; a < 3; ++a) {
          const Index row = local_of[tri[a]];
          if (row < 0) continue;
          for (int b = 0; b < 3; ++b) {
            const Index col = local_of[tri[b]];
            const double value = elements[e](a, b);
            if (col >= 0) {
              local.emplace_back(row, col, value);
            } else {
              const Point& p = fine.vertices()[tri[b]];
              lift1[row] -= value * p.x;
              lift2[row] -= value * p.y;
            }
          }
        }
      }
      SparseMatrix a_local(n, n);
      a_local.setFromTriplets(local.begin(), local.end());
      Vector f1;
      Vector f2;
      try {
        const SpdSolver solver(a_local, options);
        f1 = solver.solve(lift1);
        f2 = solver.solve(lift2);
      } catch (const SolverError& err) {
        throw SolverError("lfem cell problem on coarse triangle " + std::to_string(k) + ": " +
                              err.what(),
                          err.residual(), err.iterations());
      }
      for (Index u = 0; u < n; ++u) {
        const Index v = unknowns[u];
        cell_interior[v] = 1;
        const Index j = fine_dofs.dof(v);
        if (j < 0) continue;
        const auto lambda = coarse.barycentric(k, {f1[u], f2[u]});
        for (int a = 0; a < 3; ++a) {
          const Index i = basis.coarse_dofs().dof(ktri[a]);
          const double value = std::clamp(lambda[a], 0.0, 1.0);
          if (i >= 0 && value > 0.0) entries.emplace_back(j, i, value);
        }
      }
    }

    for (const Index e : cells[k]) {
      for (const Index v : fine.triangles()[e]) local_of[v] = -1;
    }
  }

  // Vertices on coarse edges keep F = x, i.e. plain coarse hats.
  for (Index j = 0; j < fine_dofs.size(); ++j) {
    const Index v = fine_dofs.vertex(j);
    if (cell_interior[v]) continue;
    for (const auto& [i, value] : basis.nonzeros(fine.vertices()[v])) entries.emplace_back(j, i, value);
  }

  RepresentationMatrix r(fine_dofs.size(), basis.size());
  r.setFromTriplets(entries.begin(), entries.end());
  r.makeCompressed();
  return r;
}

CoarseOperators project_operators(const RepresentationMatrix& r, const SparseMatrix& fine_stiffness,
                                  const SparseMatrix& fine_mass) {
  if (fine_stiffness.rows() != r.rows() || fine_mass.rows() != r.rows()) {
    throw ConfigError("project_operators: fine matrices and R disagree in dimension");
  }
  const SparseMatrix rt = r.transpose();
  CoarseOperators ops;
  double asymmetry = 0.0;
  auto triple = [&](const SparseMatrix& a) {
    SparseMatrix ar = a * r;
    SparseMatrix product = rt * ar;
    const SparseMatrix transposed = product.transpose();
    const SparseMatrix diff = product - transposed;
    const double scale = product.coeffs().cwiseAbs().maxCoeff();
    if (diff.nonZeros() > 0 && scale > 0.0) {
      asymmetry = std::max(asymmetry, diff.coeffs().cwiseAbs().maxCoeff() / scale);
    }
    SparseMatrix sym = 0.5 * (product + transposed);
    sym.makeCompressed();
    return sym;
  };
  ops.stiffness = triple(fine_stiffness);
  ops.mass = triple(fine_mass);
  ops.asymmetry = asymmetry;

  if (ops.mass.rows() > 0) {
    try {
      const SpdSolver check(ops.mass);
    } catch (const SolverError&) {
      throw SolverError("projected mass matrix is not positive definite: basis functions collapsed under F");
    }
  }
  return ops;
}

Vector project_load(const RepresentationMatrix& r, const Vector& fine_load) {
  if (fine_load.size() != r.rows()) throw ConfigError("project_load: load vector has wrong length");
  return r.transpose() * fine_load;
}

Vector ritz_project(const Vector& fine_values, const RepresentationMatrix& r,
                    const SparseMatrix& fine_stiffness, const CoarseOperators& ops,
                    const SolverOptions& options) {
  if (fine_values.size() != r.rows()) throw ConfigError("ritz_project: fine vector has wrong length");
  const Vector rhs = r.transpose() * (fine_stiffness * fine_values);
  if (rhs.squaredNorm() == 0.0) return Vector::Zero(rhs.size());
  return solve_spd(ops.stiffness, rhs, options);
}

}  // namespace harmwave
