#include <random>

#include <benchmark/benchmark.h>

#include "soav/numerics.hpp"
#include "soav/plant.hpp"

using soav::Index;
using soav::Matrix;
using soav::Vector;

namespace {

Matrix random_matrix(Index n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    Matrix m(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            m(i, j) = gauss(rng);
        }
    }
    return m;
}

soav::Plant example_plant() {
    soav::Plant plant;
    plant.a = Matrix(2, 2);
    plant.a << 0, 1, -2, -1;
    plant.b = Matrix(2, 1);
    plant.b << 0, 1;
    return plant;
}

}  // namespace

static void BM_Expm(benchmark::State& state) {
    const Matrix m = random_matrix(state.range(0), 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(soav::numerics::expm(m));
    }
}
BENCHMARK(BM_Expm)->Arg(2)->Arg(8)->Arg(32);

static void BM_Eigenvalues(benchmark::State& state) {
    const Matrix m = random_matrix(state.range(0), 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(soav::numerics::eigenvalues(m));
    }
}
BENCHMARK(BM_Eigenvalues)->Arg(4)->Arg(16)->Arg(50);

static void BM_SpdSolve(benchmark::State& state) {
    const Index n = state.range(0);
    Matrix g = random_matrix(n, 3);
    const Matrix spd = g.transpose() * g + Matrix::Identity(n, n);
    const soav::numerics::SpdFactorization factor(spd);
    const Vector rhs = Vector::Ones(n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(factor.solve(rhs));
    }
}
BENCHMARK(BM_SpdSolve)->Arg(50)->Arg(200)->Arg(500);

static void BM_Discretize(benchmark::State& state) {
    const auto plant = example_plant();
    const soav::Alphabet alphabet{{0.0, 0.2, 0.6, 1.0}, {0.1, 0.2, 0.3, 0.4}};
    const Vector xi = Vector::Ones(2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(soav::discretize(plant, alphabet, 5.0, state.range(0), xi));
    }
}
BENCHMARK(BM_Discretize)->Arg(100)->Arg(500);
