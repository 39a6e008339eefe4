#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace harmwave {

using Index = std::int32_t;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Vertex indices of a triangle, counterclockwise.
using Triangle = std::array<Index, 3>;

/// Largest level whose vertex and triangle counts fit in `Index`.
inline constexpr int kMaxMeshLevel = 14;

/// Structured right-isosceles triangulation of [-1,1]^2 with 2^level cells per
/// side. Every grid cell is split along its lower-left to upper-right diagonal,
/// so no triangle is obtuse. Vertices are numbered row by row (y outer, x
/// inner); triangle 2*c is the lower triangle of cell c and 2*c+1 the upper.
///
/// Immutable once built.
class TriMesh {
 public:
  /// Throws CapacityError if the level exceeds kMaxMeshLevel and ConfigError
  /// if it is negative.
  static TriMesh structured(int level);

  int level() const noexcept { return level_; }
  Index cells_per_side() const noexcept { return Index{1} << level_; }
  /// Grid spacing h = 2 / 2^level.
  double spacing() const noexcept { return 2.0 / cells_per_side(); }

  Index num_vertices() const noexcept { return static_cast<Index>(vertices_.size()); }
  Index num_triangles() const noexcept { return static_cast<Index>(triangles_.size()); }
  Index num_interior_vertices() const noexcept;

  std::span<const Point> vertices() const noexcept { return vertices_; }
  std::span<const Triangle> triangles() const noexcept { return triangles_; }
  std::span<const std::uint8_t> boundary_mask() const noexcept { return boundary_; }
  bool on_boundary(Index v) const { return boundary_.at(v) != 0; }

  /// Parent triangle on the previous level, filled by refine().
  std::optional<std::span<const Index>> parents() const;

  Index vertex_at(Index col, Index row) const noexcept {
    return row * (cells_per_side() + 1) + col;
  }

  std::array<Point, 3> corners(Index t) const;
  double area(Index t) const;
  /// Arithmetic mean of the three vertices; throws GeometryError on a bad index.
  Point centroid(Index t) const;

  /// Triangle containing p (points outside the square are clamped onto it).
  /// Ties on shared edges resolve deterministically.
  Index locate(Point p) const noexcept;
  /// Barycentric coordinates of p with respect to triangle t, in vertex order.
  std::array<double, 3> barycentric(Index t, Point p) const;

  /// Index of the triangle at `coarse_level` (< level) containing triangle t.
  Index ancestor(Index t, int coarse_level) const;

 private:
  friend TriMesh refine(const TriMesh& mesh);

  int level_ = 0;
  std::vector<Point> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<std::uint8_t> boundary_;
  std::vector<Index> parent_;
};

/// Midpoint subdivision of every triangle into four. The result is renumbered
/// into the canonical structured ordering, so refine(structured(L)) has the
/// same vertices and triangles as structured(L + 1), plus a parent map.
TriMesh refine(const TriMesh& mesh);

/// Debug dump: header `nv nt level`, then `v x y boundary_flag` and
/// `t i j k parent` lines (parent is -1 when unknown).
void write_mesh(std::ostream& out, const TriMesh& mesh);

}  // namespace harmwave
