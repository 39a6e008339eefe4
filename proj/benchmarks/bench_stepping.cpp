#include <benchmark/benchmark.h>

#include "harmwave/wave.hpp"

using namespace harmwave;

static void BM_FineStep(benchmark::State& state) {
  const TriMesh mesh = TriMesh::structured(static_cast<int>(state.range(0)));
  const DofMap dofs(mesh, Boundary::dirichlet);
  const CoefficientField field = sample_to_elements(mesh, Medium::trigonometric());
  const SteppingSystem sys(assemble(mesh, mass_matrices(mesh, 1.0), dofs).matrix,
                           assemble(mesh, stiffness_matrices(mesh, field), dofs).matrix, 1e-3);
  const Vector g = load_vector(mesh, dofs, [](Point) { return 1e-3; });
  WaveState s;
  s.v = s.p = Vector::Zero(dofs.size());
  for (auto _ : state) {
    s = step(s, sys, g);
    benchmark::DoNotOptimize(s.v.data());
  }
}
BENCHMARK(BM_FineStep)->DenseRange(5, 8)->Unit(benchmark::kMicrosecond);

static void BM_Factorize(benchmark::State& state) {
  const TriMesh mesh = TriMesh::structured(static_cast<int>(state.range(0)));
  const DofMap dofs(mesh, Boundary::dirichlet);
  const CoefficientField field = sample_to_elements(mesh, Medium::trigonometric());
  const SparseMatrix m = assemble(mesh, mass_matrices(mesh, 1.0), dofs).matrix;
  const SparseMatrix k = assemble(mesh, stiffness_matrices(mesh, field), dofs).matrix;
  for (auto _ : state) {
    SteppingSystem sys(m, k, 1e-3);
    benchmark::DoNotOptimize(sys.size());
  }
}
BENCHMARK(BM_Factorize)->DenseRange(5, 8)->Unit(benchmark::kMillisecond);
