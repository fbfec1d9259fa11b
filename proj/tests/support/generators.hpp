#pragma once

#include <vector>

#include "qmlx/qsim.hpp"
#include "qmlx/rng.hpp"

namespace generators {

// Seeded random bound circuit over the library's gate set.
inline qmlx::qsim::ParameterizedCircuit random_circuit(qmlx::Rng& rng, int num_qubits,
                                                       int num_gates) {
    using qmlx::qsim::Gate;
    qmlx::qsim::ParameterizedCircuit circuit(num_qubits);
    for (int g = 0; g < num_gates; ++g) {
        const int kind = static_cast<int>(rng.below(5));
        const int target = static_cast<int>(rng.below(static_cast<std::uint64_t>(num_qubits)));
        const double angle = rng.uniform(-3.0, 3.0);
        switch (kind) {
            case 0: circuit.push(Gate::h(target)); break;
            case 1: circuit.push(Gate::ry(target, angle)); break;
            case 2: circuit.push(Gate::rz(target, angle)); break;
            case 3: circuit.push(Gate::phase(target, angle)); break;
            default: {
                if (num_qubits < 2) {
                    circuit.push(Gate::h(target));
                    break;
                }
                int control = static_cast<int>(rng.below(static_cast<std::uint64_t>(num_qubits)));
                if (control == target) control = (control + 1) % num_qubits;
                circuit.push(Gate::cx(control, target));
                break;
            }
        }
    }
    return circuit;
}

// Random normalized state via a random circuit on |0...0>.
inline qmlx::qsim::StateVector random_state(qmlx::Rng& rng, int num_qubits) {
    const auto circuit = random_circuit(rng, num_qubits, 3 * num_qubits + 4);
    return apply_circuit(qmlx::qsim::StateVector::zero(num_qubits), circuit);
}

}  // namespace generators
