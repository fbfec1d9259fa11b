#include <benchmark/benchmark.h>

#include "qmlx/qkernel.hpp"
#include "qmlx/rng.hpp"

using qmlx::Matrix;
using qmlx::encode::FeatureMapSpec;

namespace {

Matrix random_samples(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    qmlx::Rng rng(seed);
    Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = rng.uniform();
    return m;
}

}  // namespace

static void BM_Fidelity(benchmark::State& state) {
    FeatureMapSpec spec;
    spec.num_features = static_cast<int>(state.range(0));
    spec.reps = 2;
    const Matrix samples = random_samples(2, spec.num_features, 3);
    for (auto _ : state) {
        const double f = qmlx::qkernel::fidelity(spec, samples.row(0), samples.row(1));
        benchmark::DoNotOptimize(f);
    }
}
BENCHMARK(BM_Fidelity)->Arg(2)->Arg(4)->Arg(8);

static void BM_TrainGram(benchmark::State& state) {
    FeatureMapSpec spec;
    spec.num_features = 4;
    spec.reps = 2;
    const Matrix samples = random_samples(static_cast<std::size_t>(state.range(0)), 4, 7);
    for (auto _ : state) {
        const auto gram = qmlx::qkernel::kernel_matrix(spec, samples, 1);
        benchmark::DoNotOptimize(gram.entries.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0) / 2);
}
BENCHMARK(BM_TrainGram)->Arg(30)->Arg(120);
