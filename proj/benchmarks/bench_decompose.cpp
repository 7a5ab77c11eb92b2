#include <benchmark/benchmark.h>

#include "anticanon/canonical.hpp"
#include "anticanon/decomposition.hpp"
#include "anticanon/oracle.hpp"
#include "anticanon/simdiag.hpp"

using namespace anticanon;

namespace {

OperatorFamily example_family() {
  const auto built = oracle::build_family(oracle::worked_example_specs(), 5, FieldMode::Complex);
  oracle::ScrambleSpec s;
  s.perm_seed = 1;
  return oracle::scramble(built.family, s);
}

// One Clifford block {A1..Am} of dimension `dim` plus a kernel of the same size.
OperatorFamily clifford_family(int generators, int dim) {
  oracle::BlockSpec c;
  c.kind = BlockKind::Clifford;
  c.dim = dim;
  for (int a = 0; a < generators; ++a) {
    c.support.push_back(a);
    c.constants[a] = static_cast<double>(a + 1);
  }
  c.seed = 3;
  oracle::BlockSpec k;
  k.kind = BlockKind::Kernel;
  k.dim = dim;
  const auto built = oracle::build_family({c, k}, generators, FieldMode::Complex);
  oracle::ScrambleSpec s;
  s.perm_seed = 2;
  return oracle::scramble(built.family, s);
}

void BM_DecomposeExample(benchmark::State& state) {
  const auto fam = example_family();
  const auto tol = fam.tolerance();
  for (auto _ : state) benchmark::DoNotOptimize(decompose(fam, tol));
}
BENCHMARK(BM_DecomposeExample)->Unit(benchmark::kMillisecond);

void BM_CanonicalExample(benchmark::State& state) {
  const auto fam = example_family();
  const auto tol = fam.tolerance();
  const auto rep = decompose(fam, tol);
  for (auto _ : state) benchmark::DoNotOptimize(apply_canonical(rep, fam, tol));
}
BENCHMARK(BM_CanonicalExample)->Unit(benchmark::kMillisecond);

void BM_DecomposeClifford(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const auto fam = clifford_family(4, dim);
  const auto tol = fam.tolerance();
  for (auto _ : state) benchmark::DoNotOptimize(decompose(fam, tol));
  state.SetComplexityN(2 * dim);
}
BENCHMARK(BM_DecomposeClifford)->RangeMultiplier(2)->Range(8, 64)->Unit(benchmark::kMillisecond)->Complexity();

void BM_SimDiagSquares(benchmark::State& state) {
  const auto fam = square_family(clifford_family(5, static_cast<int>(state.range(0))));
  const auto tol = fam.tolerance();
  for (auto _ : state) benchmark::DoNotOptimize(simultaneous_diagonalize(fam, tol));
}
BENCHMARK(BM_SimDiagSquares)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
