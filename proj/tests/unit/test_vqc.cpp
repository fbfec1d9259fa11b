#include <cmath>
#include <numbers>

#include <doctest.h>

#include "qmlx/rng.hpp"
#include "qmlx/vqc.hpp"
#include "support/generators.hpp"

using namespace qmlx::vqc;
using qmlx::Matrix;
using qmlx::Rng;
using qmlx::encode::Entanglement;
using qmlx::qsim::GateKind;
using qmlx::qsim::StateVector;

namespace {

VqcConfig toy_config(int num_qubits, int num_classes) {
    VqcConfig config;
    config.feature_map.num_features = num_qubits;
    config.feature_map.reps = 1;
    config.ansatz.kind = AnsatzKind::RealAmplitudes;
    config.ansatz.num_qubits = num_qubits;
    config.ansatz.reps = 1;
    config.num_classes = num_classes;
    return config;
}

}  // namespace

TEST_SUITE_BEGIN("vqc");

TEST_CASE("ansatz parameter counts") {
    AnsatzSpec ra{AnsatzKind::RealAmplitudes, 4, 3, Entanglement::Linear};
    CHECK(ra.num_parameters() == 16);
    AnsatzSpec su2{AnsatzKind::EfficientSU2, 4, 3, Entanglement::Linear};
    CHECK(su2.num_parameters() == 32);
    CHECK(build_ansatz(ra).num_parameters() == 16);
    CHECK(build_ansatz(su2).num_parameters() == 32);
}

TEST_CASE("RealAmplitudes(2,1,linear) gate structure") {
    const auto circuit = build_ansatz(AnsatzSpec{AnsatzKind::RealAmplitudes, 2, 1,
                                                 Entanglement::Linear});
    const auto& gates = circuit.gates();
    REQUIRE(gates.size() == 5);
    CHECK(gates[0].gate.kind == GateKind::RY);
    CHECK(gates[1].gate.kind == GateKind::RY);
    CHECK(gates[2].gate.kind == GateKind::CX);
    CHECK(gates[3].gate.kind == GateKind::RY);
    CHECK(gates[4].gate.kind == GateKind::RY);
    CHECK(gates[0].param == 0);
    CHECK(gates[1].param == 1);
    CHECK(gates[3].param == 2);
    CHECK(gates[4].param == 3);
}

TEST_CASE("EfficientSU2 layers are RY then RZ, qubit-minor") {
    const auto circuit =
        build_ansatz(AnsatzSpec{AnsatzKind::EfficientSU2, 2, 1, Entanglement::Linear});
    const auto& gates = circuit.gates();
    REQUIRE(gates.size() == 9);  // [RY RY RZ RZ] CX [RY RY RZ RZ]
    CHECK(gates[0].gate.kind == GateKind::RY);
    CHECK(gates[2].gate.kind == GateKind::RZ);
    CHECK(gates[4].gate.kind == GateKind::CX);
    CHECK(gates[0].gate.target == 0);
    CHECK(gates[1].gate.target == 1);
}

TEST_CASE("single-qubit forward matches the hand computation") {
    // H-mapped x=0 gives [1/sqrt2, 1/sqrt2]; a RealAmplitudes(1,1) ansatz with
    // params [theta, 0] acts as RY(theta).
    const VqcConfig config = toy_config(1, 2);
    Rng rng(13);
    for (int trial = 0; trial < 25; ++trial) {
        const double theta = rng.uniform(-3.0, 3.0);
        const VqcModel model(config, {theta, 0.0}, {});
        const auto p = model.predict_proba(std::vector<double>{0.0});
        const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        const double expected_p1 = std::pow(s * inv_sqrt2 + c * inv_sqrt2, 2.0);
        CHECK(std::abs(p[1] - expected_p1) < 1e-10);
        CHECK(std::abs(p[0] + p[1] - 1.0) < 1e-10);
    }
}

TEST_CASE("forward output is a probability vector over many random draws") {
    VqcConfig config = toy_config(4, 3);
    config.ansatz.kind = AnsatzKind::EfficientSU2;
    config.ansatz.reps = 2;
    Rng rng(77);
    const int params = config.ansatz.num_parameters();
    for (int trial = 0; trial < 10000; ++trial) {
        std::vector<double> theta(static_cast<std::size_t>(params));
        for (double& v : theta) v = rng.uniform(-3.14, 3.14);
        const VqcModel model(config, theta, {});
        std::vector<double> x(4);
        for (double& v : x) v = rng.uniform();
        const auto p = model.predict_proba(x);
        double sum = 0.0;
        for (const double v : p) {
            CHECK(v >= -1e-12);
            sum += v;
        }
        CHECK(std::abs(sum - 1.0) < 1e-10);
    }
}

TEST_CASE("zero parameters reduce the ansatz to its CX layers") {
    for (const AnsatzKind kind : {AnsatzKind::RealAmplitudes, AnsatzKind::EfficientSU2}) {
        const AnsatzSpec spec{kind, 3, 2, Entanglement::Linear};
        const auto ansatz = build_ansatz(spec);
        qmlx::qsim::ParameterizedCircuit cx_only(3);
        for (const auto& cg : ansatz.gates())
            if (cg.gate.kind == GateKind::CX) cx_only.push(cg.gate);

        const std::vector<double> zeros(static_cast<std::size_t>(spec.num_parameters()), 0.0);
        Rng rng(5);
        for (int trial = 0; trial < 20; ++trial) {
            const StateVector start = generators::random_state(rng, 3);
            const StateVector a = apply_circuit(start, ansatz, zeros);
            const StateVector b = apply_circuit(start, cx_only);
            for (std::size_t i = 0; i < a.size(); ++i)
                CHECK(std::abs(a.amplitude(i) - b.amplitude(i)) < 1e-10);
        }
    }
}

TEST_CASE("zero parameters make the forward pass the feature-map distribution") {
    const VqcConfig config = toy_config(2, 2);
    const VqcModel model(config, {0.0, 0.0, 0.0, 0.0}, {});
    const std::vector<double> x = {0.3, 0.9};
    // RealAmplitudes(2,1) at zero angles is RY(0)..CX..RY(0) = CX(0->1).
    const StateVector mapped = qmlx::encode::zz_feature_state(config.feature_map, x);
    const StateVector after_cx = apply_gate(mapped, qmlx::qsim::Gate::cx(0, 1));
    const auto probs = probabilities(after_cx);
    const auto p = model.predict_proba(x);
    CHECK(std::abs(p[0] - (probs[0] + probs[2])) < 1e-12);
    CHECK(std::abs(p[1] - (probs[1] + probs[3])) < 1e-12);
}

TEST_CASE("interpret partitions the basis states") {
    const VqcConfig config = toy_config(4, 3);
    const VqcModel model(config,
                         std::vector<double>(static_cast<std::size_t>(
                                                 config.ansatz.num_parameters()),
                                             0.0),
                         {});
    std::vector<int> counts(3, 0);
    for (std::size_t b = 0; b < 16; ++b) {
        const int c = model.interpret(b);
        REQUIRE(c >= 0);
        REQUIRE(c < 3);
        ++counts[static_cast<std::size_t>(c)];
    }
    CHECK(counts[0] == 6);
    CHECK(counts[1] == 5);
    CHECK(counts[2] == 5);

    VqcConfig bad = config;
    bad.interpret_table.assign(16, 0);  // misses classes 1 and 2
    CHECK_THROWS_AS(VqcModel(bad,
                             std::vector<double>(static_cast<std::size_t>(
                                                     bad.ansatz.num_parameters()),
                                                 0.0),
                             {}),
                    std::invalid_argument);
}

TEST_CASE("cross entropy closed forms") {
    Matrix perfect(2, 2);
    perfect.at(0, 0) = 1.0;
    perfect.at(1, 1) = 1.0;
    CHECK(cross_entropy(perfect, std::vector<int>{0, 1}) <= 1e-10);

    Matrix uniform(3, 3, 1.0 / 3.0);
    CHECK(cross_entropy(uniform, std::vector<int>{0, 1, 2}) ==
          doctest::Approx(std::log(3.0)).epsilon(1e-12));

    Matrix zero(1, 2);  // clamped at 1e-12 instead of log(0)
    CHECK(cross_entropy(zero, std::vector<int>{0}) == doctest::Approx(-std::log(1e-12)));
}

TEST_CASE("training is deterministic and logs the descent") {
    Rng rng(404);
    Matrix X(24, 2);
    std::vector<int> y(24);
    for (std::size_t i = 0; i < 24; ++i) {
        X.at(i, 0) = rng.uniform();
        X.at(i, 1) = rng.uniform();
        y[i] = X.at(i, 0) > 0.5 ? 1 : 0;
    }
    VqcConfig config = toy_config(2, 2);
    config.optimizer.max_iters = 120;
    config.seed = 9;

    const VqcModel a = VqcModel::train(X, y, config);
    const VqcModel b = VqcModel::train(X, y, config);
    CHECK(a.params() == b.params());  // bit identical

    REQUIRE(!a.training_log().empty());
    CHECK(a.training_log().size() <= static_cast<std::size_t>(config.optimizer.max_iters) + 1);
    for (std::size_t i = 1; i < a.training_log().size(); ++i)
        CHECK(a.training_log()[i] <= a.training_log()[i - 1]);
    CHECK(vqc_loss(a, X, y) == doctest::Approx(a.training_log().back()).epsilon(1e-9));

    VqcConfig other = config;
    other.seed = 10;
    const VqcModel c = VqcModel::train(X, y, other);
    CHECK(a.params() != c.params());
}

TEST_CASE("grid search covers the ansatz/reps lattice") {
    Rng rng(2);
    Matrix X(20, 2);
    std::vector<int> y(20);
    for (std::size_t i = 0; i < 20; ++i) {
        X.at(i, 0) = rng.uniform();
        X.at(i, 1) = rng.uniform();
        y[i] = X.at(i, 1) > 0.5 ? 1 : 0;
    }
    VqcConfig base = toy_config(2, 2);
    base.optimizer.max_iters = 40;
    const std::vector<int> reps = {1, 2, 3, 4};
    const auto rows = grid_search(X, y, X, y, base, reps);
    REQUIRE(rows.size() == 8);
    double best = 0.0, ra1 = -1.0;
    for (const auto& row : rows) {
        CHECK(row.error.empty());
        CHECK(row.accuracy >= 0.0);
        CHECK(row.accuracy <= 1.0);
        best = std::max(best, row.accuracy);
        if (row.ansatz == AnsatzKind::RealAmplitudes && row.reps == 1) ra1 = row.accuracy;
    }
    CHECK(best >= ra1);
}

TEST_SUITE_END();
