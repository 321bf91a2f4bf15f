// Serial reference kernels against their OpenMP counterparts.
#include <benchmark/benchmark.h>

#include "tcflow/exact_flows.hpp"
#include "tcflow/lab.hpp"
#include "tcflow/operators.hpp"
#include "tcflow/solver.hpp"

using namespace tcflow;

namespace {

const Annulus kAnnulus(1.0, 2.0);
const FlowConfig kFlow{1.0, 0.3, 0.1};

Exec exec_of(const benchmark::State& state) { return state.range(1) ? Exec::parallel : Exec::serial; }

std::pair<Field, PressureField> sample(int n) {
    const Grid g(kAnnulus, n, n, 4.0);
    return sample_on_grid(make_generalized_tc(kAnnulus, kFlow, 0.5), g);
}

void BM_Divergence(benchmark::State& state) {
    const auto [f, p] = sample(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(divergence(f, exec_of(state)));
}

void BM_Residual(benchmark::State& state) {
    const auto [f, p] = sample(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(momentum_residual_axisym(f, p, p.axial_gradient, 1.0, exec_of(state)));
}

void BM_ResidualTheta(benchmark::State& state) {
    const auto [f, p] = sample(static_cast<int>(state.range(0)));
    const Field ft = extend_in_theta(f, 8);
    const PressureField pt = extend_in_theta(p, 8);
    for (auto _ : state) benchmark::DoNotOptimize(momentum_residual_general(ft, pt, 1.0, exec_of(state)));
}

void BM_Jacobian(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto [f, p] = sample(n);
    const SteadyProblem problem(f.grid(), 1.0, kFlow, 0.5, true);
    const Eigen::VectorXd x = problem.pack(f, p);
    for (auto _ : state) benchmark::DoNotOptimize(problem.jacobian(x, 0.0, exec_of(state)));
}

void BM_Solve(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto [f, p] = sample(n);
    SolveOptions opts;
    opts.imposed_axial_gradient = 0.5;
    opts.exec = exec_of(state);
    const Field start = perturb(f, 0.1, 1);
    for (auto _ : state) benchmark::DoNotOptimize(solve_steady(f.grid(), 1.0, kFlow, start, opts));
}

void BM_YLadder(benchmark::State& state) {
    const auto [f, p] = sample(static_cast<int>(state.range(0)));
    const Field perturbed = perturb(f, 0.1, 2);
    for (auto _ : state) benchmark::DoNotOptimize(y_ladder(perturbed, 1.0, EnergyVariant::axial));
}

}  // namespace

// Second argument: 0 serial reference, 1 parallel.
BENCHMARK(BM_Divergence)->ArgsProduct({{64, 256}, {0, 1}});
BENCHMARK(BM_Residual)->ArgsProduct({{64, 256}, {0, 1}});
BENCHMARK(BM_ResidualTheta)->ArgsProduct({{64}, {0, 1}});
BENCHMARK(BM_Jacobian)->ArgsProduct({{64, 128}, {0, 1}});
BENCHMARK(BM_Solve)->ArgsProduct({{32, 64}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_YLadder)->Args({128, 1});

BENCHMARK_MAIN();
