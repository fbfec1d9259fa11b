#include <cmath>
#include <sstream>

#include <doctest.h>

#include "qmlx/qkernel.hpp"
#include "qmlx/rng.hpp"
#include "support/oracles.hpp"

using namespace qmlx::qkernel;
using qmlx::Matrix;
using qmlx::Rng;
using qmlx::encode::Entanglement;
using qmlx::encode::FeatureMapSpec;

TEST_SUITE_BEGIN("qkernel");

TEST_CASE("self-fidelity is one") {
    FeatureMapSpec spec;
    spec.num_features = 3;
    spec.reps = 2;
    const std::vector<double> x = {0.2, 0.9, 0.4};
    CHECK(fidelity(spec, x, x) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("single-feature closed form cos^2(a-b)") {
    FeatureMapSpec spec;
    spec.num_features = 1;
    spec.reps = 1;
    Rng rng(3);
    for (int trial = 0; trial < 40; ++trial) {
        const double a = rng.uniform(0.0, 1.0), b = rng.uniform(0.0, 1.0);
        const double got = fidelity(spec, std::vector<double>{a}, std::vector<double>{b});
        const double expected = std::cos(a - b) * std::cos(a - b);
        CHECK(std::abs(got - expected) < 1e-10);
    }
}

TEST_CASE("compute-uncompute equals the direct overlap") {
    Rng rng(17);
    for (int trial = 0; trial < 60; ++trial) {
        FeatureMapSpec spec;
        spec.num_features = 1 + static_cast<int>(rng.below(4));
        spec.reps = 1 + static_cast<int>(rng.below(2));
        spec.entanglement = rng.below(2) ? Entanglement::Full : Entanglement::Linear;
        std::vector<double> a(static_cast<std::size_t>(spec.num_features));
        std::vector<double> b(a.size());
        for (double& v : a) v = rng.uniform();
        for (double& v : b) v = rng.uniform();

        const double cu = fidelity(spec, a, b);
        const double direct = state_fidelity(qmlx::encode::zz_feature_state(spec, a),
                                             qmlx::encode::zz_feature_state(spec, b));
        CHECK(std::abs(cu - direct) < 1e-10);
        CHECK(std::abs(fidelity(spec, b, a) - cu) < 1e-10);
    }
}

TEST_CASE("symmetric kernel matrix properties") {
    FeatureMapSpec spec;
    spec.num_features = 2;
    spec.reps = 2;
    Matrix samples = Matrix::from_rows({{0.1, 0.8}, {0.5, 0.5}, {0.9, 0.05}});
    const KernelMatrix k = kernel_matrix(spec, samples);
    CHECK(k.symmetric);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(k.at(i, i) == 1.0);
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(k.at(i, j) == doctest::Approx(k.at(j, i)).epsilon(1e-12));
            CHECK(k.at(i, j) >= -1e-10);
            CHECK(k.at(i, j) <= 1.0 + 1e-10);
        }
    }

    const Matrix one = Matrix::from_rows({{0.3, 0.7}});
    const KernelMatrix k11 = kernel_matrix(spec, one, one);
    CHECK(k11.at(0, 0) == doctest::Approx(1.0).epsilon(1e-10));

    CHECK_THROWS_AS(kernel_matrix(spec, Matrix{}), std::invalid_argument);
}

TEST_CASE("kernel matrix is schedule independent") {
    FeatureMapSpec spec;
    spec.num_features = 3;
    spec.reps = 1;
    Rng rng(5);
    Matrix samples(8, 3);
    for (std::size_t r = 0; r < 8; ++r)
        for (std::size_t c = 0; c < 3; ++c) samples.at(r, c) = rng.uniform();
    const KernelMatrix serial = kernel_matrix(spec, samples, 1);
    const KernelMatrix threaded = kernel_matrix(spec, samples, 4);
    for (std::size_t i = 0; i < serial.entries.size(); ++i)
        CHECK(serial.entries[i] == threaded.entries[i]);  // bit-identical
}

TEST_CASE("small Gram matrices are positive semidefinite") {
    FeatureMapSpec spec;
    spec.num_features = 2;
    spec.reps = 2;
    Rng rng(29);
    Matrix samples(12, 2);
    for (std::size_t r = 0; r < samples.rows(); ++r)
        for (std::size_t c = 0; c < samples.cols(); ++c) samples.at(r, c) = rng.uniform();
    const KernelMatrix k = kernel_matrix(spec, samples);
    const auto eig = oracles::jacobi_eigenvalues(k.entries, k.rows);
    CHECK(eig.front() >= -1e-8);
}

TEST_CASE("csv export is row-major and header-free") {
    KernelMatrix k(2, 3);
    k.at(0, 0) = 1.0;
    k.at(0, 1) = 0.25;
    k.at(0, 2) = 0.5;
    k.at(1, 0) = 0.125;
    k.at(1, 1) = 1.0;
    k.at(1, 2) = 0.75;
    std::ostringstream out;
    write_csv(k, out);
    CHECK(out.str() == "1,0.25,0.5\n0.125,1,0.75\n");
}

TEST_SUITE_END();
