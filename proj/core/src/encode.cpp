#include "qmlx/encode.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qmlx::encode {

using qsim::Gate;
using qsim::ParameterizedCircuit;
using qsim::StateVector;

const char* entanglement_name(Entanglement e) {
    return e == Entanglement::Linear ? "linear" : "full";
}

Entanglement parse_entanglement(const std::string& name) {
    if (name == "linear") return Entanglement::Linear;
    if (name == "full") return Entanglement::Full;
    throw std::invalid_argument("unknown entanglement '" + name + "' (linear|full)");
}

std::vector<std::pair<int, int>> entangled_pairs(int num_qubits, Entanglement entanglement) {
    std::vector<std::pair<int, int>> pairs;
    if (entanglement == Entanglement::Linear) {
        for (int i = 0; i + 1 < num_qubits; ++i) pairs.emplace_back(i, i + 1);
    } else {
        for (int i = 0; i < num_qubits; ++i)
            for (int j = i + 1; j < num_qubits; ++j) pairs.emplace_back(i, j);
    }
    return pairs;
}

void FeatureMapSpec::validate() const {
    if (num_features < 1 || num_features > qsim::kMaxQubits)
        throw std::invalid_argument("feature map needs 1..20 features (one qubit each)");
    if (reps < 1 || reps > 8)
        throw std::invalid_argument("feature map reps must be in [1, 8]");
}

StateVector basis_encode(std::span<const int> bits) {
    if (bits.empty()) throw std::invalid_argument("basis_encode: empty bit vector");
    if (bits.size() > static_cast<std::size_t>(qsim::kMaxQubits))
        throw std::invalid_argument("basis_encode: too many bits for dense simulation");
    std::size_t index = 0;
    for (std::size_t q = 0; q < bits.size(); ++q) {
        if (bits[q] != 0 && bits[q] != 1)
            throw std::invalid_argument("basis_encode: entries must be 0 or 1");
        if (bits[q]) index |= std::size_t{1} << q;
    }
    const int n = static_cast<int>(bits.size());
    std::vector<qsim::Amplitude> amps(std::size_t{1} << n, 0.0);
    amps[index] = 1.0;
    return StateVector::from_amplitudes(n, std::move(amps));
}

StateVector amplitude_encode(std::span<const double> x) {
    if (x.empty()) throw std::invalid_argument("amplitude_encode: empty vector");
    double norm2 = 0.0;
    for (double v : x) norm2 += v * v;
    if (norm2 == 0.0) throw std::invalid_argument("amplitude_encode: all-zero vector");

    int n = 1;
    while ((std::size_t{1} << n) < x.size()) ++n;
    if (n > qsim::kMaxQubits) throw std::invalid_argument("amplitude_encode: vector too long");

    const double inv_norm = 1.0 / std::sqrt(norm2);
    std::vector<qsim::Amplitude> amps(std::size_t{1} << n, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) amps[i] = x[i] * inv_norm;
    return StateVector::from_amplitudes(n, std::move(amps));
}

ParameterizedCircuit angle_encode(std::span<const double> x, RotationAxis axis) {
    if (x.empty()) throw std::invalid_argument("angle_encode: empty vector");
    ParameterizedCircuit circuit(static_cast<int>(x.size()));
    for (std::size_t q = 0; q < x.size(); ++q) {
        const int target = static_cast<int>(q);
        circuit.push(axis == RotationAxis::Y ? Gate::ry(target, x[q]) : Gate::rz(target, x[q]));
    }
    return circuit;
}

ParameterizedCircuit zz_feature_map(const FeatureMapSpec& spec, std::span<const double> x) {
    spec.validate();
    if (static_cast<int>(x.size()) != spec.num_features)
        throw std::invalid_argument("zz_feature_map: expected " +
                                    std::to_string(spec.num_features) + " features, got " +
                                    std::to_string(x.size()));
    constexpr double pi = std::numbers::pi;
    const auto pairs = entangled_pairs(spec.num_features, spec.entanglement);

    ParameterizedCircuit circuit(spec.num_features);
    for (int rep = 0; rep < spec.reps; ++rep) {
        for (int q = 0; q < spec.num_features; ++q) circuit.push(Gate::h(q));
        for (int q = 0; q < spec.num_features; ++q) circuit.push(Gate::phase(q, 2.0 * x[q]));
        for (const auto& [i, j] : pairs) {
            const double phi = (pi - x[i]) * (pi - x[j]);
            circuit.push(Gate::cx(i, j));
            circuit.push(Gate::phase(j, 2.0 * phi));
            circuit.push(Gate::cx(i, j));
        }
    }
    return circuit;
}

StateVector zz_feature_state(const FeatureMapSpec& spec, std::span<const double> x) {
    return apply_circuit(StateVector::zero(spec.num_features), zz_feature_map(spec, x));
}

}  // namespace qmlx::encode
