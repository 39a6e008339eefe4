#include "harmwave/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <string>
#include <utility>

#include "harmwave/errors.hpp"

namespace harmwave {
namespace {

void check_level(int level) {
  if (level < 0) {
    throw ConfigError("mesh level must be non-negative, got " + std::to_string(level));
  }
  if (level > kMaxMeshLevel) {
    throw CapacityError("mesh level " + std::to_string(level) +
                        " exceeds index capacity (max " + std::to_string(kMaxMeshLevel) + ")");
  }
}

double grid_coordinate(Index i, Index n) { return -1.0 + 2.0 * static_cast<double>(i) / n; }

Index grid_index(double x, Index n) {
  return static_cast<Index>(std::lround((x + 1.0) * 0.5 * n));
}

}  // namespace

TriMesh TriMesh::structured(int level) {
  check_level(level);
  TriMesh mesh;
  mesh.level_ = level;
  const Index n = mesh.cells_per_side();
  const Index np = n + 1;

  mesh.vertices_.reserve(static_cast<std::size_t>(np) * np);
  mesh.boundary_.reserve(static_cast<std::size_t>(np) * np);
  for (Index row = 0; row < np; ++row) {
    for (Index col = 0; col < np; ++col) {
      mesh.vertices_.push_back({grid_coordinate(col, n), grid_coordinate(row, n)});
      const bool boundary = row == 0 || col == 0 || row == n || col == n;
      mesh.boundary_.push_back(boundary ? 1 : 0);
    }
  }

  mesh.triangles_.reserve(2 * static_cast<std::size_t>(n) * n);
  for (Index row = 0; row < n; ++row) {
    for (Index col = 0; col < n; ++col) {
      const Index v00 = mesh.vertex_at(col, row);
      const Index v10 = mesh.vertex_at(col + 1, row);
      const Index v01 = mesh.vertex_at(col, row + 1);
      const Index v11 = mesh.vertex_at(col + 1, row + 1);
      mesh.triangles_.push_back({v00, v10, v11});
      mesh.triangles_.push_back({v00, v11, v01});
    }
  }
  return mesh;
}

Index TriMesh::num_interior_vertices() const noexcept {
  const Index inner = cells_per_side() - 1;
  return inner * inner;
}

std::optional<std::span<const Index>> TriMesh::parents() const {
  if (parent_.empty()) return std::nullopt;
  return std::span<const Index>(parent_);
}

std::array<Point, 3> TriMesh::corners(Index t) const {
  if (t < 0 || t >= num_triangles()) {
    throw GeometryError("triangle index " + std::to_string(t) + " out of range");
  }
  const Triangle& tri = triangles_[static_cast<std::size_t>(t)];
  return {vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]};
}

double TriMesh::area(Index t) const {
  const auto [a, b, c] = corners(t);
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

Point TriMesh::centroid(Index t) const {
  const auto [a, b, c] = corners(t);
  return {(a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0};
}

Index TriMesh::locate(Point p) const noexcept {
  const Index n = cells_per_side();
  const double sx = std::clamp((p.x + 1.0) * 0.5 * n, 0.0, static_cast<double>(n));
  const double sy = std::clamp((p.y + 1.0) * 0.5 * n, 0.0, static_cast<double>(n));
  const Index col = std::min(static_cast<Index>(sx), n - 1);
  const Index row = std::min(static_cast<Index>(sy), n - 1);
  const bool lower = (sx - col) >= (sy - row);
  return 2 * (row * n + col) + (lower ? 0 : 1);
}

std::array<double, 3> TriMesh::barycentric(Index t, Point p) const {
  const auto [a, b, c] = corners(t);
  const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
  const double l1 = ((p.x - a.x) * (c.y - a.y) - (c.x - a.x) * (p.y - a.y)) / det;
  const double l2 = ((b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y)) / det;
  return {1.0 - l1 - l2, l1, l2};
}

Index TriMesh::ancestor(Index t, int coarse_level) const {
  if (coarse_level < 0 || coarse_level > level_) {
    throw ConfigError("ancestor level " + std::to_string(coarse_level) + " not in [0, " +
                      std::to_string(level_) + "]");
  }
  const Point c = centroid(t);
  const Index nc = Index{1} << coarse_level;
  const double sx = (c.x + 1.0) * 0.5 * nc;
  const double sy = (c.y + 1.0) * 0.5 * nc;
  const Index col = std::min(static_cast<Index>(sx), nc - 1);
  const Index row = std::min(static_cast<Index>(sy), nc - 1);
  const bool lower = (sx - col) > (sy - row);
  return 2 * (row * nc + col) + (lower ? 0 : 1);
}

TriMesh refine(const TriMesh& mesh) {
  check_level(mesh.level() + 1);

  // Plain midpoint subdivision first, with shared edge midpoints.
  std::vector<Point> points(mesh.vertices().begin(), mesh.vertices().end());
  std::map<std::pair<Index, Index>, Index> midpoint_of;
  auto midpoint = [&](Index a, Index b) {
    const auto key = std::minmax(a, b);
    auto [it, inserted] = midpoint_of.try_emplace({key.first, key.second}, 0);
    if (inserted) {
      const Point& pa = points[a];
      const Point& pb = points[b];
      it->second = static_cast<Index>(points.size());
      points.push_back({0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y)});
    }
    return it->second;
  };

  struct Child {
    Triangle tri;
    Index parent;
  };
  std::vector<Child> children;
  children.reserve(4 * static_cast<std::size_t>(mesh.num_triangles()));
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const auto [a, b, c] = mesh.triangles()[t];
    const Index ab = midpoint(a, b);
    const Index bc = midpoint(b, c);
    const Index ca = midpoint(c, a);
    children.push_back({{a, ab, ca}, t});
    children.push_back({{ab, b, bc}, t});
    children.push_back({{ca, bc, c}, t});
    children.push_back({{ab, bc, ca}, t});
  }

  // Renumber into the canonical structured layout.
  TriMesh fine = TriMesh::structured(mesh.level() + 1);
  const Index n = fine.cells_per_side();
  std::vector<Index> canonical(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    canonical[i] = fine.vertex_at(grid_index(points[i].x, n), grid_index(points[i].y, n));
    if (!(fine.vertices_[canonical[i]] == points[i])) {
      throw GeometryError("refine: input mesh is not a structured triangulation");
    }
  }

  fine.parent_.assign(fine.triangles_.size(), -1);
  for (const Child& child : children) {
    Triangle tri{canonical[child.tri[0]], canonical[child.tri[1]], canonical[child.tri[2]]};
    const Point c{(fine.vertices_[tri[0]].x + fine.vertices_[tri[1]].x + fine.vertices_[tri[2]].x) / 3.0,
                  (fine.vertices_[tri[0]].y + fine.vertices_[tri[1]].y + fine.vertices_[tri[2]].y) / 3.0};
    const Index slot = fine.locate(c);
    Triangle expected = fine.triangles_[slot];
    std::sort(tri.begin(), tri.end());
    std::sort(expected.begin(), expected.end());
    if (tri != expected || fine.parent_[slot] != -1) {
      throw GeometryError("refine: child triangle does not match the structured layout");
    }
    fine.parent_[slot] = child.parent;
  }
  return fine;
}

void write_mesh(std::ostream& out, const TriMesh& mesh) {
  out << mesh.num_vertices() << ' ' << mesh.num_triangles() << ' ' << mesh.level() << '\n';
  out.precision(17);
  for (Index v = 0; v < mesh.num_vertices(); ++v) {
    const Point& p = mesh.vertices()[v];
    out << "v " << p.x << ' ' << p.y << ' ' << int{mesh.boundary_mask()[v]} << '\n';
  }
  const auto parents = mesh.parents();
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const Triangle& tri = mesh.triangles()[t];
    out << "t " << tri[0] << ' ' << tri[1] << ' ' << tri[2] << ' '
        << (parents ? (*parents)[t] : Index{-1}) << '\n';
  }
}

}  // namespace harmwave
