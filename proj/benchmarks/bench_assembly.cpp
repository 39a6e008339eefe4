#include <benchmark/benchmark.h>

#include "harmwave/fem.hpp"
#include "harmwave/media.hpp"

using namespace harmwave;

static void BM_AssembleStiffness(benchmark::State& state) {
  const TriMesh mesh = TriMesh::structured(static_cast<int>(state.range(0)));
  const DofMap dofs(mesh, Boundary::dirichlet);
  const auto elements = stiffness_matrices(mesh, sample_to_elements(mesh, Medium::trigonometric()));
  for (auto _ : state) {
    SparseSym a = assemble(mesh, elements, dofs);
    benchmark::DoNotOptimize(a.matrix.nonZeros());
  }
  state.SetItemsProcessed(state.iterations() * mesh.num_triangles());
}
BENCHMARK(BM_AssembleStiffness)->DenseRange(5, 8)->Unit(benchmark::kMillisecond);

static void BM_SampleTrig(benchmark::State& state) {
  const TriMesh mesh = TriMesh::structured(static_cast<int>(state.range(0)));
  const Medium medium = Medium::trigonometric();
  for (auto _ : state) benchmark::DoNotOptimize(sample_to_elements(mesh, medium).values.data());
  state.SetItemsProcessed(state.iterations() * mesh.num_triangles());
}
BENCHMARK(BM_SampleTrig)->Arg(7)->Arg(8)->Unit(benchmark::kMillisecond);
