#include <benchmark/benchmark.h>

#include "harmwave/coarse_space.hpp"
#include "harmwave/harmonic.hpp"

using namespace harmwave;

static void BM_SolveHarmonic(benchmark::State& state) {
  const TriMesh mesh = TriMesh::structured(static_cast<int>(state.range(0)));
  const CoefficientField field = sample_to_elements(mesh, Medium::trigonometric());
  for (auto _ : state) benchmark::DoNotOptimize(solve_harmonic(mesh, field).f1.data());
}
BENCHMARK(BM_SolveHarmonic)->DenseRange(5, 8)->Unit(benchmark::kMillisecond);

// Representation plus triple products for each basis at Lf = 7, Lc = 3.
static void BM_CoarseOperators(benchmark::State& state) {
  const auto kind = static_cast<BasisKind>(state.range(0));
  const TriMesh mesh = TriMesh::structured(7);
  const DofMap dofs(mesh, Boundary::dirichlet);
  const CoefficientField field = sample_to_elements(mesh, Medium::trigonometric());
  const SparseMatrix a = assemble(mesh, stiffness_matrices(mesh, field), dofs).matrix;
  const SparseMatrix m = assemble(mesh, mass_matrices(mesh, 1.0), dofs).matrix;
  const HarmonicMap map = solve_harmonic(mesh, field);
  const CoarseBasis basis = CoarseBasis::build(kind, 3, Boundary::dirichlet);
  for (auto _ : state) {
    const RepresentationMatrix r = kind == BasisKind::lfem ? lfem_representation(basis, mesh, field, dofs)
                                                           : representation(basis, map, mesh, dofs);
    benchmark::DoNotOptimize(project_operators(r, a, m).stiffness.nonZeros());
  }
  state.SetLabel(to_string(kind));
}
BENCHMARK(BM_CoarseOperators)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);
