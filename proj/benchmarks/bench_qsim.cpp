#include <benchmark/benchmark.h>

#include "qmlx/qsim.hpp"
#include "qmlx/rng.hpp"

using namespace qmlx::qsim;

static void BM_ApplyH(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    StateVector s = StateVector::zero(n);
    const Gate h = Gate::h(0);
    for (auto _ : state) {
        s = apply_gate(s, h);
        benchmark::DoNotOptimize(s.amplitude(0));
    }
    state.SetItemsProcessed(state.iterations() * (1LL << n));
}
BENCHMARK(BM_ApplyH)->Arg(4)->Arg(10)->Arg(16);

static void BM_ApplyCX(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    StateVector s = StateVector::zero(n);
    const Gate cx = Gate::cx(0, n - 1);
    for (auto _ : state) {
        s = apply_gate(s, cx);
        benchmark::DoNotOptimize(s.amplitude(0));
    }
    state.SetItemsProcessed(state.iterations() * (1LL << n));
}
BENCHMARK(BM_ApplyCX)->Arg(4)->Arg(10)->Arg(16);

static void BM_RandomCircuit(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    qmlx::Rng rng(1);
    ParameterizedCircuit circuit(n);
    for (int g = 0; g < 50; ++g) {
        const int q = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        circuit.push(Gate::ry(q, rng.uniform(-3.0, 3.0)));
        if (n > 1 && g % 3 == 0) circuit.push(Gate::cx(q, (q + 1) % n));
    }
    const StateVector zero = StateVector::zero(n);
    for (auto _ : state) {
        const StateVector out = apply_circuit(zero, circuit);
        benchmark::DoNotOptimize(out.amplitude(0));
    }
}
BENCHMARK(BM_RandomCircuit)->Arg(4)->Arg(8)->Arg(12);

BENCHMARK_MAIN();
