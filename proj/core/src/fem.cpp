#include "harmwave/fem.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <tuple>

#include "harmwave/errors.hpp"

namespace harmwave {
namespace {

double signed_area(const std::array<Point, 3>& t) {
  return 0.5 * ((t[1].x - t[0].x) * (t[2].y - t[0].y) - (t[2].x - t[0].x) * (t[1].y - t[0].y));
}

double checked_area(const std::array<Point, 3>& tri) {
  const double area = std::abs(signed_area(tri));
  double scale = 0.0;
  for (int i = 0; i < 3; ++i) {
    const Point& a = tri[i];
    const Point& b = tri[(i + 1) % 3];
    scale = std::max(scale, (a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y));
  }
  if (!(area > 1e-14 * scale)) throw GeometryError("degenerate triangle (zero area)");
  return area;
}

}  // namespace

std::string to_string(Boundary bc) { return bc == Boundary::dirichlet ? "dirichlet" : "neumann"; }

DofMap::DofMap(const TriMesh& mesh, Boundary bc) : bc_(bc) {
  dof_of_vertex_.assign(static_cast<std::size_t>(mesh.num_vertices()), -1);
  for (Index v = 0; v < mesh.num_vertices(); ++v) {
    if (bc == Boundary::dirichlet && mesh.on_boundary(v)) {
      constrained_.push_back(v);
      continue;
    }
    dof_of_vertex_[v] = static_cast<Index>(vertex_of_dof_.size());
    vertex_of_dof_.push_back(v);
  }
}

Vector DofMap::to_nodal(const Vector& dofs) const {
  if (dofs.size() != size()) throw ConfigError("to_nodal: dof vector has wrong length");
  Vector nodal = Vector::Zero(num_vertices());
  for (Index d = 0; d < size(); ++d) nodal[vertex_of_dof_[d]] = dofs[d];
  return nodal;
}

Vector DofMap::from_nodal(const Vector& nodal) const {
  if (nodal.size() != num_vertices()) throw ConfigError("from_nodal: nodal vector has wrong length");
  Vector dofs(size());
  for (Index d = 0; d < size(); ++d) dofs[d] = nodal[vertex_of_dof_[d]];
  return dofs;
}

Eigen::Matrix<double, 3, 2> barycentric_gradients(const std::array<Point, 3>& tri) {
  const double twice_area = 2.0 * signed_area(tri);
  Eigen::Matrix<double, 3, 2> grads;
  for (int i = 0; i < 3; ++i) {
    const Point& b = tri[(i + 1) % 3];
    const Point& c = tri[(i + 2) % 3];
    grads(i, 0) = (b.y - c.y) / twice_area;
    grads(i, 1) = (c.x - b.x) / twice_area;
  }
  return grads;
}

ElementMatrix element_stiffness(const std::array<Point, 3>& tri, const Eigen::Matrix2d& a) {
  const double area = checked_area(tri);
  const Eigen::Matrix<double, 3, 2> g = barycentric_gradients(tri);
  ElementMatrix k = area * g * a * g.transpose();
  return 0.5 * (k + k.transpose());
}

ElementMatrix element_stiffness(const std::array<Point, 3>& tri, double a) {
  const double area = checked_area(tri);
  const Eigen::Matrix<double, 3, 2> g = barycentric_gradients(tri);
  return (area * a) * (g * g.transpose());
}

ElementMatrix element_mass(const std::array<Point, 3>& tri, double kinv) {
  const double area = checked_area(tri);
  ElementMatrix m = ElementMatrix::Constant(1.0);
  m.diagonal().setConstant(2.0);
  return (kinv * area / 12.0) * m;
}

std::vector<ElementMatrix> stiffness_matrices(const TriMesh& mesh, const CoefficientField& field) {
  if (field.size() != static_cast<std::size_t>(mesh.num_triangles())) {
    throw ConfigError("coefficient field does not match the mesh");
  }
  std::vector<ElementMatrix> out(field.size());
  for (Index e = 0; e < mesh.num_triangles(); ++e) {
    out[e] = field.tensors ? element_stiffness(mesh.corners(e), (*field.tensors)[e])
                           : element_stiffness(mesh.corners(e), field.values[e]);
  }
  return out;
}

std::vector<ElementMatrix> mass_matrices(const TriMesh& mesh, double kinv) {
  std::vector<ElementMatrix> out(static_cast<std::size_t>(mesh.num_triangles()));
  for (Index e = 0; e < mesh.num_triangles(); ++e) out[e] = element_mass(mesh.corners(e), kinv);
  return out;
}

SparseSym assemble(const TriMesh& mesh, std::span<const ElementMatrix> elements, const DofMap& dofs) {
  if (elements.size() != static_cast<std::size_t>(mesh.num_triangles())) {
    throw ConfigError("assemble: element count does not match the mesh");
  }
  if (dofs.num_vertices() != mesh.num_vertices()) {
    throw ConfigError("assemble: dof map does not match the mesh");
  }
  std::vector<Eigen::Triplet<double, Index>> entries;
  entries.reserve(9 * elements.size());
  for (Index e = 0; e < mesh.num_triangles(); ++e) {
    const Triangle& tri = mesh.triangles()[e];
    for (int i = 0; i < 3; ++i) {
      const Index row = dofs.dof(tri[i]);
      if (row < 0) continue;
      for (int j = 0; j < 3; ++j) {
        const Index col = dofs.dof(tri[j]);
        if (col < 0) continue;
        entries.emplace_back(row, col, elements[e](i, j));
      }
    }
  }
  SparseSym out{SparseMatrix(dofs.size(), dofs.size()), dofs};
  out.matrix.setFromTriplets(entries.begin(), entries.end());
  out.matrix.makeCompressed();
  return out;
}

SparseMatrix assemble_full(const TriMesh& mesh, std::span<const ElementMatrix> elements) {
  return assemble(mesh, elements, DofMap(mesh, Boundary::neumann)).matrix;
}

Vector load_vector(const TriMesh& mesh, const DofMap& dofs, const std::function<double(Point)>& g) {
  Vector load = Vector::Zero(dofs.size());
  for (Index e = 0; e < mesh.num_triangles(); ++e) {
    const auto c = mesh.corners(e);
    const double w = mesh.area(e) / 3.0;
    // Midpoint of edge (i, i+1) carries phi_i = phi_{i+1} = 1/2.
    double g_mid[3];
    for (int i = 0; i < 3; ++i) {
      const Point& a = c[i];
      const Point& b = c[(i + 1) % 3];
      g_mid[i] = g({0.5 * (a.x + b.x), 0.5 * (a.y + b.y)});
    }
    const Triangle& tri = mesh.triangles()[e];
    for (int i = 0; i < 3; ++i) {
      const Index d = dofs.dof(tri[i]);
      if (d < 0) continue;
      load[d] += w * 0.5 * (g_mid[i] + g_mid[(i + 2) % 3]);
    }
  }
  return load;
}

Vector load_vector(const TriMesh& mesh, const DofMap& dofs, const SourceTerm& source, double t) {
  Vector load = Vector::Zero(dofs.size());
  for (const SeparableTerm& term : source.terms()) {
    load += term.time(t) * load_vector(mesh, dofs, term.space);
  }
  return load;
}

void write_matrix(std::ostream& out, const SparseMatrix& matrix) {
  std::vector<std::tuple<Index, Index, double>> entries;
  for (Index col = 0; col < matrix.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(matrix, col); it; ++it) {
      if (it.row() >= it.col()) entries.emplace_back(it.row(), it.col(), it.value());
    }
  }
  std::sort(entries.begin(), entries.end());
  out.precision(17);
  for (const auto& [i, j, v] : entries) out << i << ' ' << j << ' ' << v << '\n';
}

}  // namespace harmwave
