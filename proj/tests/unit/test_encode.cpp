#include <cmath>
#include <complex>
#include <numbers>

#include <doctest.h>

#include "qmlx/encode.hpp"
#include "qmlx/rng.hpp"

using namespace qmlx::encode;
using qmlx::Rng;
using qmlx::qsim::StateVector;

namespace {
constexpr double kInvSqrt2 = 0.7071067811865476;
}

TEST_SUITE_BEGIN("encode");

TEST_CASE("basis encoding") {
    const StateVector s0 = basis_encode(std::vector<int>{0});
    CHECK(s0.amplitude(0).real() == 1.0);
    CHECK(std::abs(s0.amplitude(1)) == 0.0);

    // qubit0=1, qubit1=0 -> index 1 (little-endian)
    const StateVector s10 = basis_encode(std::vector<int>{1, 0});
    CHECK(s10.amplitude(1).real() == 1.0);

    const StateVector s11 = basis_encode(std::vector<int>{1, 1});
    CHECK(s11.amplitude(3).real() == 1.0);

    CHECK_THROWS_AS(basis_encode(std::vector<int>{0, 2}), std::invalid_argument);
    CHECK_THROWS_AS(basis_encode(std::vector<int>{}), std::invalid_argument);
}

TEST_CASE("amplitude encoding") {
    const StateVector a = amplitude_encode(std::vector<double>{1, 0, 0, 0});
    CHECK(a.num_qubits() == 2);
    CHECK(a.amplitude(0).real() == 1.0);

    const StateVector b = amplitude_encode(std::vector<double>{1, 1, 1, 1});
    for (std::size_t i = 0; i < 4; ++i) CHECK(b.amplitude(i).real() == doctest::Approx(0.5));

    const StateVector c = amplitude_encode(std::vector<double>{3, 4});
    CHECK(c.amplitude(0).real() == doctest::Approx(0.6));
    CHECK(c.amplitude(1).real() == doctest::Approx(0.8));

    // zero-padding to the next power of two
    const StateVector d = amplitude_encode(std::vector<double>{1, 1, 1});
    CHECK(d.num_qubits() == 2);
    CHECK(std::abs(d.amplitude(3)) == 0.0);

    CHECK_THROWS_AS(amplitude_encode(std::vector<double>{0, 0}), std::invalid_argument);
}

TEST_CASE("amplitude encoding always has unit norm") {
    Rng rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> x(1 + rng.below(9));
        for (double& v : x) v = rng.uniform(-5.0, 5.0);
        if (std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; })) x[0] = 1.0;
        const StateVector s = amplitude_encode(x);
        double norm = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) norm += std::norm(s.amplitude(i));
        CHECK(std::abs(norm - 1.0) < 1e-12);
    }
}

TEST_CASE("angle encoding") {
    constexpr double pi = std::numbers::pi;
    // zero rotation about Z leaves |0> alone up to global phase
    const auto cz = angle_encode(std::vector<double>{0.0}, RotationAxis::Z);
    const StateVector sz = apply_circuit(StateVector::zero(1), cz);
    CHECK(std::abs(std::abs(sz.amplitude(0)) - 1.0) < 1e-12);

    // RY(pi)|0> = |1>
    const auto cy = angle_encode(std::vector<double>{pi}, RotationAxis::Y);
    const StateVector sy = apply_circuit(StateVector::zero(1), cy);
    CHECK(std::abs(sy.amplitude(0)) < 1e-12);
    CHECK(std::abs(sy.amplitude(1) - std::complex<double>{1.0, 0.0}) < 1e-12);

    const auto c2 = angle_encode(std::vector<double>{0.7, 0.2}, RotationAxis::Y);
    CHECK(c2.gate_count() == 2);
}

TEST_CASE("zz feature map structure") {
    FeatureMapSpec spec;
    spec.num_features = 3;
    spec.reps = 1;
    spec.entanglement = Entanglement::Linear;
    const auto circuit = zz_feature_map(spec, std::vector<double>{0.1, 0.2, 0.3});
    // 3 H + 3 Phase + 2 pairs x (CX, Phase, CX)
    CHECK(circuit.gate_count() == 12);
    CHECK(circuit.fully_bound());

    spec.entanglement = Entanglement::Full;
    const auto full = zz_feature_map(spec, std::vector<double>{0.1, 0.2, 0.3});
    CHECK(full.gate_count() == 3 + 3 + 3 * 3);

    spec.reps = 2;
    spec.entanglement = Entanglement::Linear;
    const auto two = zz_feature_map(spec, std::vector<double>{0.1, 0.2, 0.3});
    CHECK(two.gate_count() == 24);

    CHECK_THROWS_AS(zz_feature_map(spec, std::vector<double>{0.1}), std::invalid_argument);
    FeatureMapSpec bad = spec;
    bad.reps = 9;
    CHECK_THROWS_AS(zz_feature_map(bad, std::vector<double>{0.1, 0.2, 0.3}),
                    std::invalid_argument);
}

TEST_CASE("single-feature map closed form") {
    FeatureMapSpec spec;
    spec.num_features = 1;
    spec.reps = 1;
    const double a = 0.8317;
    const StateVector s = zz_feature_state(spec, std::vector<double>{a});
    CHECK(std::abs(s.amplitude(0) - std::complex<double>{kInvSqrt2, 0.0}) < 1e-12);
    CHECK(std::abs(s.amplitude(1) - std::polar(kInvSqrt2, 2.0 * a)) < 1e-12);
}

TEST_CASE("pair phase vanishes at x_i = x_j = pi") {
    constexpr double pi = std::numbers::pi;
    FeatureMapSpec spec;
    spec.num_features = 2;
    spec.reps = 1;
    const auto circuit = zz_feature_map(spec, std::vector<double>{pi, pi});
    // the pair phase angle is 2*(pi-pi)(pi-pi) = 0
    const auto& gates = circuit.gates();
    bool found_pair_phase = false;
    for (std::size_t g = 0; g + 2 < gates.size(); ++g) {
        if (gates[g].gate.kind == qmlx::qsim::GateKind::CX &&
            gates[g + 1].gate.kind == qmlx::qsim::GateKind::Phase) {
            found_pair_phase = true;
            CHECK(gates[g + 1].gate.angle == 0.0);
        }
    }
    CHECK(found_pair_phase);
}

TEST_CASE("zz map state is normalized; single-rep magnitudes are uniform") {
    // A single repetition is H layers followed by diagonal phases and CX, so
    // every amplitude keeps magnitude 2^(-n/2). Further repetitions insert H
    // on a phase-laden state, which moves weight between basis states, so
    // only normalization holds there.
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        FeatureMapSpec spec;
        spec.num_features = 1 + static_cast<int>(rng.below(4));
        spec.reps = 1 + static_cast<int>(rng.below(3));
        spec.entanglement = rng.below(2) ? Entanglement::Full : Entanglement::Linear;
        std::vector<double> x(static_cast<std::size_t>(spec.num_features));
        for (double& v : x) v = rng.uniform();

        const StateVector s = zz_feature_state(spec, x);
        const double expected = 1.0 / std::sqrt(static_cast<double>(s.size()));
        double norm = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (spec.reps == 1) CHECK(std::abs(std::abs(s.amplitude(i)) - expected) < 1e-10);
            norm += std::norm(s.amplitude(i));
        }
        CHECK(std::abs(norm - 1.0) < 1e-10);
    }
}

TEST_CASE("pair data map is symmetric in its inputs") {
    FeatureMapSpec spec;
    spec.num_features = 2;
    spec.reps = 1;
    Rng rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const double xi = rng.uniform(), xj = rng.uniform();
        const auto a = zz_feature_map(spec, std::vector<double>{xi, xj});
        const auto b = zz_feature_map(spec, std::vector<double>{xj, xi});
        // the CX-sandwiched pair phase angle is identical under the swap
        CHECK(a.gates()[5].gate.angle == doctest::Approx(b.gates()[5].gate.angle).epsilon(1e-15));
    }
}

TEST_CASE("entangled pair orders") {
    const auto linear = entangled_pairs(4, Entanglement::Linear);
    REQUIRE(linear.size() == 3);
    CHECK(linear[0] == std::pair<int, int>{0, 1});
    CHECK(linear[2] == std::pair<int, int>{2, 3});

    const auto full = entangled_pairs(3, Entanglement::Full);
    REQUIRE(full.size() == 3);
    CHECK(full[0] == std::pair<int, int>{0, 1});
    CHECK(full[1] == std::pair<int, int>{0, 2});
    CHECK(full[2] == std::pair<int, int>{1, 2});
}

TEST_SUITE_END();
