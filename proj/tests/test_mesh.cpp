#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "harmwave/errors.hpp"
#include "harmwave/mesh.hpp"

using namespace harmwave;

namespace {

double dot(Point a, Point b, Point o) { return (a.x - o.x) * (b.x - o.x) + (a.y - o.y) * (b.y - o.y); }

}  // namespace

TEST(Mesh, CountsFollowTheLevel) {
  for (int level = 0; level <= 6; ++level) {
    const TriMesh mesh = TriMesh::structured(level);
    const Index n = Index{1} << level;
    EXPECT_EQ(mesh.num_vertices(), (n + 1) * (n + 1));
    EXPECT_EQ(mesh.num_triangles(), 2 * n * n);
    EXPECT_EQ(mesh.num_interior_vertices(), (n - 1) * (n - 1));
  }
  const TriMesh unit = TriMesh::structured(0);
  EXPECT_EQ(unit.num_vertices(), 4);
  EXPECT_EQ(unit.num_triangles(), 2);
  EXPECT_EQ(unit.num_interior_vertices(), 0);
}

TEST(Mesh, InteriorCountsOfTheTables) {
  EXPECT_EQ(TriMesh::structured(2).num_interior_vertices(), 9);
  EXPECT_EQ(TriMesh::structured(3).num_interior_vertices(), 49);
  EXPECT_EQ(TriMesh::structured(4).num_interior_vertices(), 225);
  EXPECT_EQ(TriMesh::structured(8).num_interior_vertices(), 65025);
  EXPECT_EQ(TriMesh::structured(9).num_interior_vertices(), 261121);
}

TEST(Mesh, RejectsBadLevels) {
  EXPECT_THROW(TriMesh::structured(-1), ConfigError);
  EXPECT_THROW(TriMesh::structured(kMaxMeshLevel + 1), CapacityError);
}

TEST(Mesh, AreasSumToFourAndAreEqual) {
  for (int level : {0, 1, 3, 7}) {
    const TriMesh mesh = TriMesh::structured(level);
    const double h = mesh.spacing();
    double total = 0.0;
    for (Index t = 0; t < mesh.num_triangles(); ++t) {
      EXPECT_DOUBLE_EQ(mesh.area(t), 0.5 * h * h);
      total += mesh.area(t);
    }
    EXPECT_NEAR(total, 4.0, 4e-12);
  }
}

TEST(Mesh, TrianglesAreRightIsoscelesAndCounterclockwise) {
  const TriMesh mesh = TriMesh::structured(4);
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const auto [a, b, c] = mesh.corners(t);
    const double cross = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
    EXPECT_GT(cross, 0.0);
    // Exactly one right angle, no obtuse one.
    const double da = dot(b, c, a), db = dot(a, c, b), dc = dot(a, b, c);
    EXPECT_GE(std::min({da, db, dc}), 0.0);
    EXPECT_EQ((da == 0.0) + (db == 0.0) + (dc == 0.0), 1);
  }
}

TEST(Mesh, BoundaryMaskMarksTheSquareEdges) {
  const TriMesh mesh = TriMesh::structured(3);
  Index count = 0;
  for (Index v = 0; v < mesh.num_vertices(); ++v) {
    const Point p = mesh.vertices()[v];
    const bool edge = std::abs(p.x) == 1.0 || std::abs(p.y) == 1.0;
    EXPECT_EQ(mesh.on_boundary(v), edge);
    count += edge;
  }
  EXPECT_EQ(count, 4 * 8);
}

TEST(Mesh, LexicographicVertexOrder) {
  const TriMesh mesh = TriMesh::structured(2);
  EXPECT_EQ(mesh.vertices()[0], (Point{-1.0, -1.0}));
  EXPECT_EQ(mesh.vertices()[1], (Point{-0.5, -1.0}));
  EXPECT_EQ(mesh.vertices()[5], (Point{-1.0, -0.5}));
  EXPECT_EQ(mesh.vertex_at(4, 4), 24);
}

TEST(Mesh, CentroidIsTheVertexMean) {
  const TriMesh mesh = TriMesh::structured(0);
  // The upper triangle of the single cell is (-1,-1), (1,1), (-1,1).
  const Point c = mesh.centroid(1);
  EXPECT_DOUBLE_EQ(c.x, -1.0 / 3.0);
  EXPECT_DOUBLE_EQ(c.y, 1.0 / 3.0);
  const Point d = mesh.centroid(0);
  EXPECT_DOUBLE_EQ(d.x, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(d.y, -1.0 / 3.0);
  EXPECT_THROW(mesh.centroid(2), GeometryError);
  EXPECT_THROW(mesh.centroid(-1), GeometryError);
}

TEST(Mesh, RefineMatchesDirectConstruction) {
  for (int level = 0; level <= 4; ++level) {
    const TriMesh fine = refine(TriMesh::structured(level));
    const TriMesh direct = TriMesh::structured(level + 1);
    ASSERT_EQ(fine.level(), level + 1);
    ASSERT_EQ(fine.num_vertices(), direct.num_vertices());
    ASSERT_EQ(fine.num_triangles(), direct.num_triangles());
    for (Index v = 0; v < fine.num_vertices(); ++v) EXPECT_EQ(fine.vertices()[v], direct.vertices()[v]);
    for (Index t = 0; t < fine.num_triangles(); ++t) EXPECT_EQ(fine.triangles()[t], direct.triangles()[t]);
  }
  const TriMesh once = refine(TriMesh::structured(0));
  EXPECT_EQ(once.num_vertices(), 9);
  EXPECT_EQ(once.num_triangles(), 8);
}

TEST(Mesh, ParentsCoverFourChildrenOfQuarterArea) {
  const TriMesh coarse = TriMesh::structured(2);
  const TriMesh fine = refine(coarse);
  ASSERT_TRUE(fine.parents().has_value());
  EXPECT_FALSE(coarse.parents().has_value());
  const auto parents = *fine.parents();
  std::vector<int> children(static_cast<std::size_t>(coarse.num_triangles()), 0);
  for (Index t = 0; t < fine.num_triangles(); ++t) {
    const Index p = parents[t];
    ++children[p];
    EXPECT_DOUBLE_EQ(fine.area(t), coarse.area(p) / 4.0);
    for (const Point& corner : fine.corners(t)) {
      const auto lambda = coarse.barycentric(p, corner);
      EXPECT_GE(std::min({lambda[0], lambda[1], lambda[2]}), -1e-14);
    }
    EXPECT_EQ(fine.ancestor(t, coarse.level()), p);
  }
  for (int c : children) EXPECT_EQ(c, 4);
}

TEST(Mesh, AncestorChainsThroughLevels) {
  const TriMesh m3 = TriMesh::structured(3);
  const TriMesh m4 = refine(m3);
  const TriMesh m5 = refine(m4);
  for (Index t = 0; t < m5.num_triangles(); ++t) {
    EXPECT_EQ(m5.ancestor(t, 3), m4.ancestor((*m5.parents())[t], 3));
    EXPECT_EQ(m5.ancestor(t, 5), t);
  }
  EXPECT_THROW(m5.ancestor(0, 6), ConfigError);
}

TEST(Mesh, LocateFindsAContainingTriangle) {
  const TriMesh mesh = TriMesh::structured(3);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 2000; ++k) {
    const Point p{u(rng), u(rng)};
    const auto lambda = mesh.barycentric(mesh.locate(p), p);
    EXPECT_GE(std::min({lambda[0], lambda[1], lambda[2]}), -1e-12);
    EXPECT_NEAR(lambda[0] + lambda[1] + lambda[2], 1.0, 1e-14);
  }
  // Corners and outside points are clamped onto the square.
  EXPECT_EQ(mesh.locate({1.0, 1.0}), mesh.locate({5.0, 3.0}));
  const Index t = mesh.locate({-2.0, -2.0});
  const auto lambda = mesh.barycentric(t, {-1.0, -1.0});
  EXPECT_NEAR(std::max({lambda[0], lambda[1], lambda[2]}), 1.0, 1e-14);
}

TEST(Mesh, WriteMeshFormat) {
  std::ostringstream out;
  write_mesh(out, refine(TriMesh::structured(0)));
  std::istringstream in(out.str());
  Index nv = 0, nt = 0;
  int level = -1;
  in >> nv >> nt >> level;
  EXPECT_EQ(nv, 9);
  EXPECT_EQ(nt, 8);
  EXPECT_EQ(level, 1);
  std::string line;
  int v_lines = 0, t_lines = 0;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string first;
    fields >> first;
    int n = 1;
    while (fields >> line) ++n;
    if (n == 4) ++v_lines;
    if (n == 5) ++t_lines;
  }
  EXPECT_EQ(v_lines, 9);
  EXPECT_EQ(t_lines, 8);
}
