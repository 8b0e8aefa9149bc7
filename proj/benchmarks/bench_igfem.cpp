#include <benchmark/benchmark.h>

#include "igfem/experiment.hpp"

using namespace igfem;

namespace {

std::shared_ptr<const Mesh> mesh(int level) { return std::make_shared<const Mesh>(build_crisscross_mesh(level)); }

// Family index: 0 p2c, 1 p2nc_interp, 2 p2nc_std, 3 p3, 4 pk_interp, 5 pk_lagrange.
Family family_arg(int64_t i) { return static_cast<Family>(i); }

}  // namespace

static void BM_Mesh(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(build_crisscross_mesh(static_cast<int>(state.range(0))));
}
BENCHMARK(BM_Mesh)->DenseRange(5, 8)->Unit(benchmark::kMillisecond);

static void BM_PkDualBasis(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const TriGeom g({Point2{0, 0}, Point2{0.3, 0.05}, Point2{0.1, 0.27}});
  for (auto _ : state) benchmark::DoNotOptimize(pk_dual_basis(g, k));
}
BENCHMARK(BM_PkDualBasis)->DenseRange(4, 6)->Unit(benchmark::kMicrosecond);

static void BM_LocalStiffness(benchmark::State& state) {
  const Family f = family_arg(state.range(0));
  const int k = static_cast<int>(state.range(1));
  const auto els = build_elements(*mesh(2), f, k);
  for (auto _ : state) benchmark::DoNotOptimize(local_stiffness(els[0]));
}
BENCHMARK(BM_LocalStiffness)
    ->Args({0, 2})
    ->Args({3, 3})
    ->Args({4, 4})
    ->Args({5, 4})
    ->Args({4, 6})
    ->Args({5, 6})
    ->Unit(benchmark::kMicrosecond);

static void BM_Assemble(benchmark::State& state) {
  const Family f = family_arg(state.range(0));
  const int k = static_cast<int>(state.range(1));
  const int threads = static_cast<int>(state.range(2));
  const Discretization d = make_discretization(mesh(5), f, k, threads);
  const ScalarFn& rhs = find_problem("sine").f;
  for (auto _ : state) benchmark::DoNotOptimize(assemble_system(d, rhs, threads));
}
BENCHMARK(BM_Assemble)
    ->Args({4, 4, 1})
    ->Args({4, 4, 4})
    ->Args({5, 4, 1})
    ->Args({5, 4, 4})
    ->Unit(benchmark::kMillisecond);

// Interpolated Pk against Lagrange Pk on the same grid: fewer unknowns in CG.
static void BM_Solve(benchmark::State& state) {
  const Family f = family_arg(state.range(0));
  const int k = static_cast<int>(state.range(1));
  const Discretization d = make_discretization(mesh(6), f, k, 4);
  const SparseSystem s = assemble_system(d, find_problem("sine").f, 4);
  int iterations = 0;
  for (auto _ : state) iterations = cg_solve(s.A, s.F).stats.iterations;
  state.counters["unknowns"] = s.A.rows();
  state.counters["cg_iters"] = iterations;
}
BENCHMARK(BM_Solve)->Args({3, 3})->Args({5, 3})->Args({4, 4})->Args({5, 4})->Unit(benchmark::kMillisecond);

static void BM_ConditionEstimate(benchmark::State& state) {
  const Discretization d = make_discretization(mesh(4), family_arg(state.range(0)), static_cast<int>(state.range(1)));
  const SparseSystem s = assemble_system(d, find_problem("sine").f);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_condition(s.A));
  state.counters["unknowns"] = s.A.rows();
}
BENCHMARK(BM_ConditionEstimate)->Args({3, 3})->Args({5, 3})->Unit(benchmark::kMillisecond);

static void BM_Level(benchmark::State& state) {
  const Family f = family_arg(state.range(0));
  const int k = static_cast<int>(state.range(1));
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_level(f, k, static_cast<int>(state.range(2)), find_problem("sine"), CgOptions{}, 1));
}
BENCHMARK(BM_Level)->Args({0, 2, 6})->Args({5, 2, 6})->Args({1, 2, 6})->Args({2, 2, 6})->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
