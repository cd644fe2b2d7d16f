#include <benchmark/benchmark.h>

#include "ptwell/constraints.hpp"
#include "ptwell/oracle.hpp"
#include "ptwell/spectrum.hpp"

using namespace ptwell;

static void BM_SolvePattern(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_pattern(k, 1));
    }
}
BENCHMARK(BM_SolvePattern)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

static void BM_SolveRoots(benchmark::State& state) {
    const double s_max = static_cast<double>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_roots(1.0, s_max, 1e-12));
    }
}
BENCHMARK(BM_SolveRoots)->Arg(10)->Arg(20)->Arg(40);

static void BM_CriticalTangency(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(first_oval_tangency());
    }
}
BENCHMARK(BM_CriticalTangency);

static void BM_Spectrum(benchmark::State& state) {
    Eigen::MatrixXd m(3, 3);
    m << 0, 1, 1, 1, 0, 1, 1, 1, 0;
    const CouplingMatrix a(m);
    for (auto _ : state) {
        benchmark::DoNotOptimize(spectrum(a));
    }
}
BENCHMARK(BM_Spectrum);

static void BM_OracleEigenvalues(benchmark::State& state) {
    Eigen::MatrixXd m(2, 2);
    m << 0, 1, 1, 0;
    const DiscretizedHamiltonian h = discretize(CouplingMatrix(m), static_cast<int>(state.range(0)));
    const auto solver = state.range(1) ? OracleSolver::channel_schur : OracleSolver::full;
    for (auto _ : state) {
        benchmark::DoNotOptimize(eigenvalues(h, solver));
    }
}
BENCHMARK(BM_OracleEigenvalues)
    ->Args({100, 0})
    ->Args({100, 1})
    ->Args({200, 0})
    ->Args({200, 1})
    ->Unit(benchmark::kMillisecond);

static void BM_BiorthogonalBasis(benchmark::State& state) {
    const DiscretizedHamiltonian h =
        discretize(CouplingMatrix(Eigen::MatrixXd::Constant(1, 1, 1.0)), static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(biorthogonal_basis(h));
    }
}
BENCHMARK(BM_BiorthogonalBasis)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
