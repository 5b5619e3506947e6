#include <benchmark/benchmark.h>

#include "qfriction/analysis.hpp"
#include "qfriction/markov.hpp"
#include "qfriction/perturbative.hpp"
#include "qfriction/quadrature.hpp"

using namespace qfriction;

namespace {

MotionState approach(double v) {
    MotionState s;
    s.speed = v;
    s.angle = constants::pi;
    s.initial_height = 5e-9;
    return s;
}

}  // namespace

static void BM_ReflectionImagAxis(benchmark::State& state) {
    const auto m = material::drude_gold();
    double xi = 1e12;
    for (auto _ : state) {
        benchmark::DoNotOptimize(material::reflection_imag_axis(m, xi));
        xi *= 1.0000001;
    }
}
BENCHMARK(BM_ReflectionImagAxis);

static void BM_SemiInfiniteQuadrature(benchmark::State& state) {
    const auto spec = QuadratureSpec{}.with_rel_tol(1e-10);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            quadrature::integrate_semi_infinite<double>([](double x) { return x * x * std::exp(-x); }, spec));
}
BENCHMARK(BM_SemiInfiniteQuadrature);

static void BM_CpForce(benchmark::State& state) {
    const AtomParams a;
    const auto m = material::drude_gold();
    const auto axis = state.range(0) ? Axis::imaginary : Axis::real;
    for (auto _ : state) benchmark::DoNotOptimize(markov::cp_force_d2(a, m, approach(50.0), axis));
}
BENCHMARK(BM_CpForce)->Arg(0)->Arg(1)->ArgNames({"imaginary"});

static void BM_CoeffVelocityPart(benchmark::State& state) {
    const AtomParams a;
    const auto m = material::drude_gold();
    for (auto _ : state)
        benchmark::DoNotOptimize(markov::coeff_velocity_part(a, m, approach(50.0), markov::Transition::ground));
}
BENCHMARK(BM_CoeffVelocityPart)->Unit(benchmark::kMillisecond);

static void BM_FrictionD4(benchmark::State& state) {
    const AtomParams a;
    const auto m = material::drude_gold();
    const auto s = approach(50.0);
    for (auto _ : state) {
        const auto dyn = markov::internal_dynamics(a, m, s);
        benchmark::DoNotOptimize(markov::friction_force_d4(a, m, s, dyn));
    }
}
BENCHMARK(BM_FrictionD4)->Unit(benchmark::kMillisecond);

static void BM_Force2VelocityPart(benchmark::State& state) {
    const AtomParams a;
    const auto m = material::drude_gold();
    for (auto _ : state) benchmark::DoNotOptimize(perturbative::force_2_velocity_part(a, m, approach(50.0)));
}
BENCHMARK(BM_Force2VelocityPart)->Unit(benchmark::kMillisecond);

static void BM_Sigma4(benchmark::State& state) {
    const AtomParams a;
    const auto m = material::drude_gold();
    for (auto _ : state) benchmark::DoNotOptimize(perturbative::sigma4_0(a, m, approach(50.0)));
}
BENCHMARK(BM_Sigma4)->Unit(benchmark::kMillisecond);

static void BM_AmpC02(benchmark::State& state) {
    const AtomParams a;
    const auto m = material::drude_gold();
    auto s = approach(5.0);
    s.time = 2.0 * constants::pi * 8.0 / a.omega10;
    for (auto _ : state) benchmark::DoNotOptimize(perturbative::amp_c02_parts(a, m, s));
}
BENCHMARK(BM_AmpC02)->Unit(benchmark::kMillisecond);

static void BM_BuildTable(benchmark::State& state) {
    const AtomParams a;
    const auto m = material::drude_gold();
    analysis::TableOptions options;
    options.threads = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(analysis::build_table(a, m, approach(0.0), options));
}
BENCHMARK(BM_BuildTable)->Arg(1)->Unit(benchmark::kSecond)->Iterations(1);

BENCHMARK_MAIN();
