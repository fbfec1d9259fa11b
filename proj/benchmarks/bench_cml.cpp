#include <benchmark/benchmark.h>

#include "qmlx/forest.hpp"
#include "qmlx/rng.hpp"
#include "qmlx/svm.hpp"

using namespace qmlx::cml;
using qmlx::Matrix;

namespace {

struct Problem {
    qmlx::qkernel::KernelMatrix K;
    std::vector<int> y;
    Matrix X;
};

Problem make_problem(std::size_t n) {
    qmlx::Rng rng(11);
    Problem p;
    p.X = Matrix(n, 4);
    p.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < 4; ++j) p.X.at(i, j) = rng.uniform();
        p.y[i] = p.X.at(i, 0) + p.X.at(i, 1) > 1.0 ? 1 : -1;
    }
    p.K = qmlx::qkernel::KernelMatrix(n, n);
    p.K.symmetric = true;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            p.K.at(i, j) = rbf_kernel(p.X.row(i), p.X.row(j), 1.0);
    return p;
}

}  // namespace

static void BM_SmoTrain(benchmark::State& state) {
    const Problem p = make_problem(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        const SvmBinaryModel model = svm_train_binary(p.K, p.y, SmoConfig{});
        benchmark::DoNotOptimize(model.bias);
    }
}
BENCHMARK(BM_SmoTrain)->Arg(40)->Arg(120);

static void BM_ForestFit(benchmark::State& state) {
    const Problem p = make_problem(120);
    std::vector<int> labels(p.y.size());
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = p.y[i] > 0 ? 1 : 0;
    ForestConfig config;
    config.num_trees = static_cast<int>(state.range(0));
    config.seed = 5;
    for (auto _ : state) {
        const ForestModel model = ForestModel::fit(p.X, labels, 2, config, 1);
        benchmark::DoNotOptimize(model.trees().size());
    }
}
BENCHMARK(BM_ForestFit)->Arg(10)->Arg(100);
