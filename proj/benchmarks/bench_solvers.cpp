#include <random>

#include <benchmark/benchmark.h>

#include "soav/admm.hpp"
#include "soav/lp.hpp"
#include "soav/plant.hpp"

using soav::DiscreteProblem;
using soav::Index;
using soav::Matrix;
using soav::Vector;

namespace {

DiscreteProblem example_problem(Index nu) {
    soav::Plant plant;
    plant.a = Matrix(2, 2);
    plant.a << 0, 1, -2, -1;
    plant.b = Matrix(2, 1);
    plant.b << 0, 1;
    const soav::Alphabet alphabet{{0.0, 0.2, 0.6, 1.0}, {0.1, 0.2, 0.3, 0.4}};
    Vector xi(2);
    xi << 5.0, 5.0;
    return soav::discretize(plant, alphabet, 5.0, nu, xi);
}

}  // namespace

// Cost of a fixed number of ADMM passes (the tolerance is set unreachably
// tight so the loop never exits early).
static void BM_AdmmIterations(benchmark::State& state) {
    const auto pb = example_problem(state.range(0));
    const soav::admm::AdmmSolver solver(pb);
    soav::admm::AdmmParams params;
    params.gamma = 0.1;
    params.eps_primal = 1e-300;
    params.eps_dual = 1e-300;
    params.max_iter = 200;
    for (auto _ : state) {
        benchmark::DoNotOptimize(solver.solve(params));
    }
    state.SetItemsProcessed(state.iterations() * params.max_iter);
}
BENCHMARK(BM_AdmmIterations)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);

static void BM_AdmmSolveToTolerance(benchmark::State& state) {
    const auto pb = example_problem(state.range(0));
    const soav::admm::AdmmSolver solver(pb);
    soav::admm::AdmmParams params;
    params.gamma = 0.1;
    params.eps_primal = 1e-5;
    params.eps_dual = 1e-5;
    params.max_iter = 400000;
    for (auto _ : state) {
        benchmark::DoNotOptimize(solver.solve(params));
    }
}
BENCHMARK(BM_AdmmSolveToTolerance)->Arg(60)->Arg(120)->Unit(benchmark::kMillisecond);

static void BM_LpReformulate(benchmark::State& state) {
    const auto pb = example_problem(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(soav::lp::reformulate(pb));
    }
}
BENCHMARK(BM_LpReformulate)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

static void BM_LpSolve(benchmark::State& state) {
    const auto pb = example_problem(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(soav::lp::solve_reference(pb));
    }
}
BENCHMARK(BM_LpSolve)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

static void BM_ProxShiftedL1(benchmark::State& state) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unit(-2.0, 2.0);
    Vector x(state.range(0));
    for (Index i = 0; i < x.size(); ++i) {
        x(i) = unit(rng);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(soav::admm::prox_shifted_l1(x, 0.2, 0.05));
    }
}
BENCHMARK(BM_ProxShiftedL1)->Arg(500)->Arg(5000);

BENCHMARK_MAIN();
