#include "plap/plap.hpp"

#include <benchmark/benchmark.h>

#include <numbers>

using namespace plap;

namespace {

ProblemSpec doubleWell(double p, int n) {
    return makeProblem({p, n}, Autonomous1D(PowerSum({{-1.0, 1.0}, {1.0, 3.0}})));
}

ProblemSpec radialModel() {
    return makeProblem({2.0, 2}, ModelAB{CoefficientFn(PowerSum::polynomial({1.0, 1.0})),
                                         CoefficientFn(PowerSum::polynomial({2.0, 0.0, -1.0})), 3.0});
}

void BM_IntegrateRadial(benchmark::State& state) {
    const double p = static_cast<double>(state.range(0)) / 10.0;
    const ProblemSpec spec = doubleWell(p, 3);
    for (auto _ : state) benchmark::DoNotOptimize(integrateRadial(spec, 2.0, 3.0, 1.0));
}
BENCHMARK(BM_IntegrateRadial)->Arg(20)->Arg(25)->Arg(30);

void BM_IntegrateLinearized(benchmark::State& state) {
    const ProblemSpec spec = doubleWell(2.0, 3);
    const RadialTrajectory tr = integrateRadial(spec, 2.0, 3.0, 0.9);
    for (auto _ : state) benchmark::DoNotOptimize(integrateLinearized(spec, 2.0, tr));
}
BENCHMARK(BM_IntegrateLinearized);

void BM_SolveAmplitude(benchmark::State& state) {
    const ProblemSpec spec = radialModel();
    ShootOptions opts;
    opts.method = ShootMethod::Amplitude;
    for (auto _ : state) benchmark::DoNotOptimize(solveAtLambda(spec, 10.0, opts));
}
BENCHMARK(BM_SolveAmplitude)->Unit(benchmark::kMillisecond);

void BM_SolveBoundarySlope(benchmark::State& state) {
    const ProblemSpec spec = doubleWell(2.0, 1);
    ShootOptions opts;
    opts.method = ShootMethod::BoundarySlope;
    for (auto _ : state) benchmark::DoNotOptimize(solveAtLambda(spec, 50.0, opts));
}
BENCHMARK(BM_SolveBoundarySlope)->Unit(benchmark::kMillisecond);

void BM_ScalingSolver(benchmark::State& state) {
    const ProblemSpec spec = doubleWell(2.0, 1);
    for (auto _ : state) benchmark::DoNotOptimize(solveAutonomousByScaling(spec, 2.0));
}
BENCHMARK(BM_ScalingSolver)->Unit(benchmark::kMillisecond);

void BM_TimeMap(benchmark::State& state) {
    const Autonomous1D f(PowerSum({{-1.0, 0.0}, {1.0, 3.0}}));
    for (auto _ : state) benchmark::DoNotOptimize(timeMapLambda(f, 2.0, 2.0));
}
BENCHMARK(BM_TimeMap);

void BM_LambdaCurve(benchmark::State& state) {
    const ProblemSpec spec = makeProblem({2.0, 1}, Autonomous1D(PowerSum({{-1.0, 0.0}, {1.0, 3.0}})));
    for (auto _ : state) benchmark::DoNotOptimize(traceLambdaCurve(spec, {0.1, 5.0}, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_LambdaCurve)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_Homotopy(benchmark::State& state) {
    const ProblemSpec spec = radialModel();
    for (auto _ : state) benchmark::DoNotOptimize(traceHomotopy(spec, HomotopyKind::LinearTermSwitch, 10));
}
BENCHMARK(BM_Homotopy)->Unit(benchmark::kMillisecond);

void BM_ModelAudit(benchmark::State& state) {
    const ProblemSpec spec = radialModel();
    for (auto _ : state) benchmark::DoNotOptimize(checkModelHypotheses(spec));
}
BENCHMARK(BM_ModelAudit);

}  // namespace

BENCHMARK_MAIN();
