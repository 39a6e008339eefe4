#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "harmwave/coarse_space.hpp"
#include "harmwave/errors.hpp"
#include "oracles.hpp"

using namespace harmwave;

namespace {

// Hat of the structured mesh (diagonal lower-left to upper-right) at node c.
double structured_hat(Point node, Point p, double h) {
  const double u = (p.x - node.x) / h;
  const double v = (p.y - node.y) / h;
  return std::max(0.0, 1.0 - std::max({std::abs(u), std::abs(v), std::abs(u - v)}));
}

struct Nested {
  TriMesh fine;
  DofMap dofs;
  CoefficientField field;
  SparseMatrix stiffness;
  SparseMatrix mass;

  Nested(int level, const Medium& medium, Boundary bc = Boundary::dirichlet)
      : fine(TriMesh::structured(level)), dofs(fine, bc), field(sample_to_elements(fine, medium)) {
    stiffness = assemble(fine, stiffness_matrices(fine, field), dofs).matrix;
    mass = assemble(fine, mass_matrices(fine, 1.0), dofs).matrix;
  }
};

Eigen::MatrixXd dense(const SparseMatrix& m) { return Eigen::MatrixXd(m); }

}  // namespace

TEST(CoarseBasis, Sizes) {
  EXPECT_EQ(CoarseBasis::build(BasisKind::p1_composed, 2, Boundary::dirichlet).size(), 9);
  EXPECT_EQ(CoarseBasis::build(BasisKind::p1_composed, 3, Boundary::dirichlet).size(), 49);
  EXPECT_EQ(CoarseBasis::build(BasisKind::lfem, 4, Boundary::dirichlet).size(), 225);
  EXPECT_EQ(CoarseBasis::build(BasisKind::p1_composed, 2, Boundary::neumann).size(), 25);
  // Every cubic spline whose support meets the open square: 2^L + 3 per side.
  EXPECT_EQ(CoarseBasis::build(BasisKind::spline_composed, 2, Boundary::dirichlet).size(), 49);
  EXPECT_EQ(CoarseBasis::build(BasisKind::spline_composed, 3, Boundary::neumann).size(), 121);
  EXPECT_THROW(CoarseBasis::build(BasisKind::p1_composed, 0, Boundary::dirichlet), ConfigError);
  const CoarseBasis b = CoarseBasis::build(BasisKind::p1_composed, 1, Boundary::dirichlet);
  EXPECT_THROW(b(1, {0.0, 0.0}), ConfigError);
  EXPECT_THROW(b(-1, {0.0, 0.0}), ConfigError);
}

TEST(CoarseBasis, HatsMatchClosedForm) {
  const CoarseBasis b = CoarseBasis::build(BasisKind::p1_composed, 2, Boundary::dirichlet);
  const TriMesh& coarse = b.coarse_mesh();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 500; ++k) {
    const Point p{u(rng), u(rng)};
    for (Index i = 0; i < b.size(); ++i) {
      const Point node = coarse.vertices()[b.coarse_dofs().vertex(i)];
      EXPECT_NEAR(b(i, p), structured_hat(node, p, coarse.spacing()), 1e-14);
    }
  }
}

TEST(CoarseBasis, HatsPartitionUnityAwayFromTheBoundary) {
  const CoarseBasis b = CoarseBasis::build(BasisKind::p1_composed, 3, Boundary::dirichlet);
  const CoarseBasis n = CoarseBasis::build(BasisKind::p1_composed, 3, Boundary::neumann);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-0.75, 0.75);  // one coarse cell in from the edge
  std::uniform_real_distribution<double> w(-1.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    double sum = 0.0;
    for (const auto& [i, v] : b.nonzeros({u(rng), u(rng)})) sum += v;
    EXPECT_NEAR(sum, 1.0, 1e-14);
    double all = 0.0;
    for (const auto& [i, v] : n.nonzeros({w(rng), w(rng)})) all += v;
    EXPECT_NEAR(all, 1.0, 1e-14);
  }
}

TEST(CoarseBasis, SplinesMatchCoxDeBoorTimesWeight) {
  for (Boundary bc : {Boundary::dirichlet, Boundary::neumann}) {
    const CoarseBasis b = CoarseBasis::build(BasisKind::spline_composed, 2, bc);
    const int n = 4;
    const double h = 0.5;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 300; ++k) {
      const Point p{u(rng), u(rng)};
      const double weight = bc == Boundary::dirichlet ? (1 - p.x * p.x) * (1 - p.y * p.y) : 1.0;
      for (int jy = 0; jy < n + 3; ++jy) {
        for (int jx = 0; jx < n + 3; ++jx) {
          const double expected =
              weight * oracle::bspline(jx - 1, (p.x + 1) / h) * oracle::bspline(jy - 1, (p.y + 1) / h);
          EXPECT_NEAR(b(jy * (n + 3) + jx, p), expected, 1e-14);
        }
      }
    }
  }
}

TEST(CoarseBasis, NeumannSplinesPartitionUnity) {
  const CoarseBasis b = CoarseBasis::build(BasisKind::spline_composed, 3, Boundary::neumann);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 500; ++k) {
    double sum = 0.0;
    const auto nz = b.nonzeros({u(rng), u(rng)});
    EXPECT_LE(nz.size(), 16u);
    for (const auto& [i, v] : nz) sum += v;
    EXPECT_NEAR(sum, 1.0, 1e-13);
  }
  EXPECT_DOUBLE_EQ(cubic_bspline(0.0), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(cubic_bspline(1.0), 1.0 / 6.0);
  EXPECT_EQ(cubic_bspline(2.0), 0.0);
}

TEST(CoarseBasis, DirichletSplinesVanishOnTheBoundary) {
  const CoarseBasis b = CoarseBasis::build(BasisKind::spline_composed, 3, Boundary::dirichlet);
  for (int k = 0; k <= 40; ++k) {
    const double s = -1.0 + k / 20.0;
    for (const Point p : {Point{-1.0, s}, Point{1.0, s}, Point{s, -1.0}, Point{s, 1.0}}) {
      for (Index i = 0; i < b.size(); ++i) EXPECT_EQ(b(i, p), 0.0);
    }
  }
}

TEST(Representation, IdentityMapOnTheSameMesh) {
  const Nested n(3, Medium::constant(1.0));
  const HarmonicMap id = identity_map(n.fine, n.field);
  const CoarseBasis b = CoarseBasis::build(BasisKind::p1_composed, 3, Boundary::dirichlet);
  const RepresentationMatrix r = representation(b, id, n.fine, n.dofs);
  EXPECT_LE((dense(r) - Eigen::MatrixXd::Identity(49, 49)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Representation, NestedIdentityIsLinearProlongation) {
  const Nested n(5, Medium::constant(1.0));
  const HarmonicMap id = identity_map(n.fine, n.field);
  const CoarseBasis b = CoarseBasis::build(BasisKind::p1_composed, 2, Boundary::dirichlet);
  const RepresentationMatrix r = representation(b, id, n.fine, n.dofs);
  const TriMesh& coarse = b.coarse_mesh();
  const Eigen::MatrixXd rd = dense(r);
  for (Index j = 0; j < n.dofs.size(); ++j) {
    const Point x = n.fine.vertices()[n.dofs.vertex(j)];
    for (Index i = 0; i < b.size(); ++i) {
      const Point node = coarse.vertices()[b.coarse_dofs().vertex(i)];
      EXPECT_NEAR(rd(j, i), structured_hat(node, x, coarse.spacing()), 1e-14);
      EXPECT_GE(rd(j, i), 0.0);
      EXPECT_LE(rd(j, i), 1.0);
      if (rd(j, i) == 1.0) EXPECT_EQ(x, node);
    }
  }
  // Galerkin products on nested spaces reproduce the directly assembled
  // coarse operators.
  const CoarseOperators ops = project_operators(r, n.stiffness, n.mass);
  const DofMap cdofs(coarse, Boundary::dirichlet);
  const Eigen::MatrixXd kc = oracle::stiffness_matrix(coarse, cdofs, std::vector<double>(32, 1.0));
  const Eigen::MatrixXd mc = oracle::mass_matrix(coarse, cdofs);
  EXPECT_LE((dense(ops.stiffness) - kc).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((dense(ops.mass) - mc).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Representation, RowSupportIsBounded) {
  const Nested n(6, Medium::trigonometric());
  const HarmonicMap map = solve_harmonic(n.fine, n.field);
  for (BasisKind kind : {BasisKind::p1_composed, BasisKind::spline_composed}) {
    const CoarseBasis b = CoarseBasis::build(kind, 3, Boundary::dirichlet);
    const RepresentationMatrix r = representation(b, map, n.fine, n.dofs);
    const SparseMatrix rows = r.transpose();
    const Index cap = kind == BasisKind::p1_composed ? 3 : 16;
    for (Index j = 0; j < rows.outerSize(); ++j) {
      Index count = 0;
      for (SparseMatrix::InnerIterator it(rows, j); it; ++it) count += it.value() != 0.0;
      EXPECT_LE(count, cap);
    }
    EXPECT_LE(r.nonZeros(), static_cast<Eigen::Index>(n.dofs.size()) * 16);
  }
}

TEST(Representation, EntriesAreBasisValuesAtTheMappedNodes) {
  const Nested n(5, Medium::trigonometric());
  const HarmonicMap map = solve_harmonic(n.fine, n.field);
  const CoarseBasis b = CoarseBasis::build(BasisKind::spline_composed, 2, Boundary::dirichlet);
  const RepresentationMatrix r = representation(b, map, n.fine, n.dofs);
  // Unit coarse vector -> that basis function sampled at F(x_j).
  Vector e = Vector::Zero(b.size());
  e[17] = 1.0;
  const Vector column = r * e;
  for (Index j = 0; j < n.dofs.size(); ++j) {
    EXPECT_NEAR(column[j], b(17, map(n.dofs.vertex(j))), 1e-15);
  }
}

TEST(Lfem, ConstantMediumGivesPlainHats) {
  const Nested n(5, Medium::constant(3.0));
  const CoarseBasis b = CoarseBasis::build(BasisKind::lfem, 2, Boundary::dirichlet);
  const RepresentationMatrix r = lfem_representation(b, n.fine, n.field, n.dofs);
  const CoarseBasis hats = CoarseBasis::build(BasisKind::p1_composed, 2, Boundary::dirichlet);
  const RepresentationMatrix plain = representation(hats, identity_map(n.fine, n.field), n.fine, n.dofs);
  EXPECT_LE((dense(r) - dense(plain)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Lfem, PartitionOfUnityAwayFromTheBoundary) {
  const Nested n(6, Medium::trigonometric());
  const CoarseBasis b = CoarseBasis::build(BasisKind::lfem, 3, Boundary::dirichlet);
  const RepresentationMatrix r = lfem_representation(b, n.fine, n.field, n.dofs);
  const Vector sums = r * Vector::Ones(b.size());
  const TriMesh& coarse = b.coarse_mesh();
  for (Index j = 0; j < n.dofs.size(); ++j) {
    const Point x = n.fine.vertices()[n.dofs.vertex(j)];
    bool interior_cell = true;
    for (Index v : coarse.triangles()[coarse.locate(x)]) interior_cell &= !coarse.on_boundary(v);
    if (interior_cell) EXPECT_NEAR(sums[j], 1.0, 1e-9);
    EXPECT_LE(sums[j], 1.0 + 1e-9);
  }
}

TEST(Lfem, DiffersFromGlobalMapOnRoughMedia) {
  const Nested n(5, Medium::trigonometric());
  const CoarseBasis b = CoarseBasis::build(BasisKind::lfem, 2, Boundary::dirichlet);
  const RepresentationMatrix local = lfem_representation(b, n.fine, n.field, n.dofs);
  const CoarseBasis hats = CoarseBasis::build(BasisKind::p1_composed, 2, Boundary::dirichlet);
  const RepresentationMatrix global = representation(hats, solve_harmonic(n.fine, n.field), n.fine, n.dofs);
  EXPECT_GT((dense(local) - dense(global)).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(Lfem, NeedsANestedFineMesh) {
  const Nested n(2, Medium::constant(1.0));
  const CoarseBasis b = CoarseBasis::build(BasisKind::lfem, 3, Boundary::dirichlet);
  EXPECT_THROW(lfem_representation(b, n.fine, n.field, n.dofs), ConfigError);
}

TEST(Operators, IdentityRepresentation) {
  const Nested n(3, Medium::trigonometric());
  SparseMatrix eye(n.dofs.size(), n.dofs.size());
  eye.setIdentity();
  const CoarseOperators ops = project_operators(eye, n.stiffness, n.mass);
  EXPECT_LE((dense(ops.stiffness) - dense(n.stiffness)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LE((dense(ops.mass) - dense(n.mass)).cwiseAbs().maxCoeff(), 1e-15);
  const Vector f = Vector::LinSpaced(n.dofs.size(), 0.0, 1.0);
  EXPECT_EQ(project_load(eye, f), f);
}

TEST(Operators, SymmetricBeforeSymmetrization) {
  const Nested n(6, Medium::trigonometric());
  const HarmonicMap map = solve_harmonic(n.fine, n.field);
  const CoarseBasis b = CoarseBasis::build(BasisKind::spline_composed, 3, Boundary::dirichlet);
  const CoarseOperators ops = project_operators(representation(b, map, n.fine, n.dofs), n.stiffness, n.mass);
  EXPECT_LE(ops.asymmetry, 1e-13);
  const Eigen::MatrixXd m = dense(ops.mass);
  EXPECT_EQ((m - m.transpose()).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_GT(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues()[0], 0.0);
  const Eigen::VectorXd k_eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(dense(ops.stiffness)).eigenvalues();
  EXPECT_GT(k_eig[0], 0.0);
}

TEST(Operators, SingleBasisFunction) {
  const Nested n(4, Medium::trigonometric());
  const HarmonicMap map = solve_harmonic(n.fine, n.field);
  const CoarseBasis b = CoarseBasis::build(BasisKind::p1_composed, 1, Boundary::dirichlet);
  const RepresentationMatrix r = representation(b, map, n.fine, n.dofs);
  const CoarseOperators ops = project_operators(r, n.stiffness, n.mass);
  ASSERT_EQ(ops.size(), 1);
  const Vector psi = r.col(0);
  EXPECT_NEAR(ops.stiffness.coeff(0, 0), psi.dot(n.stiffness * psi), 1e-12);
  EXPECT_GT(ops.stiffness.coeff(0, 0), 0.0);
}

TEST(Operators, CollapsedBasisIsAnError) {
  const Nested n(3, Medium::constant(1.0));
  // Two identical columns make R^T M R singular.
  SparseMatrix r(n.dofs.size(), 2);
  std::vector<Eigen::Triplet<double, Index>> t;
  for (Index j = 0; j < n.dofs.size(); ++j) {
    t.emplace_back(j, 0, 1.0);
    t.emplace_back(j, 1, 1.0);
  }
  r.setFromTriplets(t.begin(), t.end());
  try {
    project_operators(r, n.stiffness, n.mass);
    FAIL() << "expected SolverError";
  } catch (const SolverError& e) {
    EXPECT_NE(std::string(e.what()).find("collapsed"), std::string::npos);
  }
  EXPECT_THROW(project_operators(r, SparseMatrix(3, 3), n.mass), ConfigError);
}

TEST(Operators, LoadIsLinear) {
  const Nested n(4, Medium::trigonometric());
  const CoarseBasis b = CoarseBasis::build(BasisKind::spline_composed, 2, Boundary::dirichlet);
  const RepresentationMatrix r = representation(b, solve_harmonic(n.fine, n.field), n.fine, n.dofs);
  const Vector f = load_vector(n.fine, n.dofs, [](Point p) { return p.x * p.y; });
  const Vector g = load_vector(n.fine, n.dofs, [](Point p) { return 1.0 + p.y; });
  EXPECT_LE((project_load(r, f + 2.0 * g) - project_load(r, f) - 2.0 * project_load(r, g)).cwiseAbs().maxCoeff(),
            1e-14);
  EXPECT_EQ(project_load(r, Vector::Zero(n.dofs.size())).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_THROW(project_load(r, Vector::Zero(3)), ConfigError);
}

TEST(Ritz, ReproducesRepresentableData) {
  const Nested n(5, Medium::trigonometric());
  const CoarseBasis b = CoarseBasis::build(BasisKind::spline_composed, 2, Boundary::dirichlet);
  const RepresentationMatrix r = representation(b, solve_harmonic(n.fine, n.field), n.fine, n.dofs);
  const CoarseOperators ops = project_operators(r, n.stiffness, n.mass);
  const Vector c0 = Vector::LinSpaced(b.size(), -1.0, 1.0);
  EXPECT_LE((ritz_project(r * c0, r, n.stiffness, ops) - c0).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_EQ(ritz_project(Vector::Zero(n.dofs.size()), r, n.stiffness, ops).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Ritz, IsEnergyOrthogonal) {
  const Nested n(5, Medium::trigonometric());
  const CoarseBasis b = CoarseBasis::build(BasisKind::p1_composed, 3, Boundary::dirichlet);
  const RepresentationMatrix r = representation(b, solve_harmonic(n.fine, n.field), n.fine, n.dofs);
  const CoarseOperators ops = project_operators(r, n.stiffness, n.mass);
  Vector u(n.dofs.size());
  for (Index j = 0; j < n.dofs.size(); ++j) {
    const Point p = n.fine.vertices()[n.dofs.vertex(j)];
    u[j] = std::sin(3.0 * p.x) * (1 - p.y * p.y) * (1 - p.x * p.x);
  }
  const Vector c = ritz_project(u, r, n.stiffness, ops);
  const Vector rhs = r.transpose() * (n.stiffness * u);
  EXPECT_LE((r.transpose() * (n.stiffness * (u - r * c))).norm(), 1e-9 * rhs.norm());
}

TEST(Ritz, NestedConstantMediumMatchesDenseOracle) {
  const Nested n(4, Medium::constant(1.0));
  const CoarseBasis b = CoarseBasis::build(BasisKind::p1_composed, 2, Boundary::dirichlet);
  const RepresentationMatrix r = representation(b, identity_map(n.fine, n.field), n.fine, n.dofs);
  const CoarseOperators ops = project_operators(r, n.stiffness, n.mass);

  Eigen::MatrixXd rd(n.dofs.size(), b.size());
  const TriMesh& coarse = b.coarse_mesh();
  for (Index j = 0; j < n.dofs.size(); ++j)
    for (Index i = 0; i < b.size(); ++i)
      rd(j, i) = structured_hat(coarse.vertices()[b.coarse_dofs().vertex(i)],
                                n.fine.vertices()[n.dofs.vertex(j)], coarse.spacing());
  const Eigen::MatrixXd a = oracle::stiffness_matrix(n.fine, n.dofs, n.field.values);
  Vector u(n.dofs.size());
  for (Index j = 0; j < n.dofs.size(); ++j) {
    const Point p = n.fine.vertices()[n.dofs.vertex(j)];
    u[j] = std::exp(p.x) * (1 - p.x * p.x) * (1 - p.y * p.y);
  }
  const Vector expected = oracle::solve(rd.transpose() * a * rd, rd.transpose() * (a * u));
  EXPECT_LE((ritz_project(u, r, n.stiffness, ops) - expected).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Ritz, GalerkinSolveIsEnergyOptimal) {
  const Nested n(5, Medium::trigonometric());
  const CoarseBasis b = CoarseBasis::build(BasisKind::spline_composed, 2, Boundary::dirichlet);
  const RepresentationMatrix r = representation(b, solve_harmonic(n.fine, n.field), n.fine, n.dofs);
  const CoarseOperators ops = project_operators(r, n.stiffness, n.mass);
  const Vector f = load_vector(n.fine, n.dofs, [](Point) { return 1.0; });
  const Vector uf = solve_spd(n.stiffness, f);
  const Vector c = solve_spd(ops.stiffness, project_load(r, f));
  const auto energy_error = [&](const Vector& coarse) {
    const Vector e = uf - r * coarse;
    return e.dot(n.stiffness * e);
  };
  const double best = energy_error(c);
  std::mt19937_64 rng(13);
  std::normal_distribution<double> g(0.0, 1e-3);
  for (int k = 0; k < 10; ++k) {
    Vector other = c;
    for (auto& v : other) v += g(rng);
    EXPECT_LE(best, energy_error(other));
  }
}
