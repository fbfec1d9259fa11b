#include "qmlx/qsim.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qmlx::qsim {

namespace {

void check_qubit(int qubit, int num_qubits, const char* what) {
    if (qubit < 0 || qubit >= num_qubits)
        throw std::out_of_range(std::string(what) + " qubit " + std::to_string(qubit) +
                                " out of range for " + std::to_string(num_qubits) + " qubits");
}

void check_gate(const Gate& gate, int num_qubits) {
    check_qubit(gate.target, num_qubits, "target");
    if (gate.kind == GateKind::CX) {
        check_qubit(gate.control, num_qubits, "control");
        if (gate.control == gate.target)
            throw std::invalid_argument("CX control and target must differ");
    }
}

// In-place action on an amplitude vector. Little-endian: bit q of the basis
// index is qubit q.
void apply_in_place(std::vector<Amplitude>& a, const Gate& gate) {
    const std::size_t dim = a.size();
    const std::size_t t = std::size_t{1} << gate.target;
    switch (gate.kind) {
        case GateKind::H: {
            const double s = 1.0 / std::sqrt(2.0);
            for (std::size_t i = 0; i < dim; ++i) {
                if (i & t) continue;
                const Amplitude lo = a[i];
                const Amplitude hi = a[i | t];
                a[i] = s * (lo + hi);
                a[i | t] = s * (lo - hi);
            }
            break;
        }
        case GateKind::RY: {
            const double c = std::cos(gate.angle / 2.0);
            const double s = std::sin(gate.angle / 2.0);
            for (std::size_t i = 0; i < dim; ++i) {
                if (i & t) continue;
                const Amplitude lo = a[i];
                const Amplitude hi = a[i | t];
                a[i] = c * lo - s * hi;
                a[i | t] = s * lo + c * hi;
            }
            break;
        }
        case GateKind::RZ: {
            const Amplitude e0 = std::polar(1.0, -gate.angle / 2.0);
            const Amplitude e1 = std::polar(1.0, gate.angle / 2.0);
            for (std::size_t i = 0; i < dim; ++i) a[i] *= (i & t) ? e1 : e0;
            break;
        }
        case GateKind::Phase: {
            const Amplitude e = std::polar(1.0, gate.angle);
            for (std::size_t i = 0; i < dim; ++i)
                if (i & t) a[i] *= e;
            break;
        }
        case GateKind::CX: {
            const std::size_t c = std::size_t{1} << gate.control;
            for (std::size_t i = 0; i < dim; ++i) {
                if ((i & c) && !(i & t)) std::swap(a[i], a[i | t]);
            }
            break;
        }
    }
}

}  // namespace

const char* gate_name(GateKind kind) {
    switch (kind) {
        case GateKind::H: return "h";
        case GateKind::RY: return "ry";
        case GateKind::RZ: return "rz";
        case GateKind::Phase: return "p";
        case GateKind::CX: return "cx";
    }
    return "?";
}

std::vector<Amplitude> gate_unitary(const Gate& gate) {
    const double half = gate.angle / 2.0;
    switch (gate.kind) {
        case GateKind::H: {
            const double s = 1.0 / std::sqrt(2.0);
            return {s, s, s, -s};
        }
        case GateKind::RY:
            return {std::cos(half), -std::sin(half), std::sin(half), std::cos(half)};
        case GateKind::RZ:
            return {std::polar(1.0, -half), 0.0, 0.0, std::polar(1.0, half)};
        case GateKind::Phase:
            return {1.0, 0.0, 0.0, std::polar(1.0, gate.angle)};
        case GateKind::CX:
            // |control target>: |10> <-> |11|
            return {1, 0, 0, 0,  //
                    0, 1, 0, 0,  //
                    0, 0, 0, 1,  //
                    0, 0, 1, 0};
    }
    throw std::logic_error("unknown gate kind");
}

StateVector StateVector::zero(int num_qubits) {
    if (num_qubits < 1 || num_qubits > kMaxQubits)
        throw std::invalid_argument("num_qubits must be in [1, " + std::to_string(kMaxQubits) +
                                    "], got " + std::to_string(num_qubits));
    std::vector<Amplitude> amps(std::size_t{1} << num_qubits, Amplitude{0.0, 0.0});
    amps[0] = Amplitude{1.0, 0.0};
    return StateVector(num_qubits, std::move(amps));
}

StateVector StateVector::from_amplitudes(int num_qubits, std::vector<Amplitude> amplitudes) {
    if (num_qubits < 1 || num_qubits > kMaxQubits)
        throw std::invalid_argument("num_qubits out of range");
    if (amplitudes.size() != (std::size_t{1} << num_qubits))
        throw std::invalid_argument("amplitude count must equal 2^num_qubits");
    double norm2 = 0.0;
    for (const Amplitude& amp : amplitudes) norm2 += std::norm(amp);
    if (std::abs(norm2 - 1.0) > 1e-10)
        throw std::invalid_argument("state is not normalized: |psi|^2 = " + std::to_string(norm2));
    return StateVector(num_qubits, std::move(amplitudes));
}

ParameterizedCircuit::ParameterizedCircuit(int num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits < 1 || num_qubits > kMaxQubits)
        throw std::invalid_argument("circuit num_qubits out of range");
}

void ParameterizedCircuit::push(const Gate& gate) {
    check_gate(gate, num_qubits_);
    gates_.push_back({gate, -1});
}

int ParameterizedCircuit::push_parameterized(GateKind kind, int target) {
    if (kind != GateKind::RY && kind != GateKind::RZ && kind != GateKind::Phase)
        throw std::invalid_argument("only rotation/phase gates take parameters");
    Gate gate{kind, target, -1, 0.0};
    check_gate(gate, num_qubits_);
    gates_.push_back({gate, num_parameters_});
    return num_parameters_++;
}

void ParameterizedCircuit::append(const ParameterizedCircuit& other) {
    if (other.num_qubits_ != num_qubits_)
        throw std::invalid_argument("cannot append circuit with different qubit count");
    for (const CircuitGate& cg : other.gates_) {
        CircuitGate shifted = cg;
        if (shifted.param >= 0) shifted.param += num_parameters_;
        gates_.push_back(shifted);
    }
    num_parameters_ += other.num_parameters_;
}

ParameterizedCircuit ParameterizedCircuit::bound(std::span<const double> params) const {
    if (static_cast<int>(params.size()) != num_parameters_)
        throw std::invalid_argument("expected " + std::to_string(num_parameters_) +
                                    " parameters, got " + std::to_string(params.size()));
    ParameterizedCircuit out(num_qubits_);
    out.gates_.reserve(gates_.size());
    for (const CircuitGate& cg : gates_) {
        Gate g = cg.gate;
        if (cg.param >= 0) g.angle = params[static_cast<std::size_t>(cg.param)];
        out.gates_.push_back({g, -1});
    }
    return out;
}

StateVector apply_gate(const StateVector& state, const Gate& gate) {
    check_gate(gate, state.num_qubits());
    std::vector<Amplitude> amps = state.amplitudes();
    apply_in_place(amps, gate);
    return StateVector(state.num_qubits(), std::move(amps));
}

StateVector apply_circuit(const StateVector& state, const ParameterizedCircuit& circuit,
                          std::span<const double> params) {
    if (circuit.num_qubits() != state.num_qubits())
        throw std::invalid_argument("circuit and state qubit counts differ");
    if (static_cast<int>(params.size()) != circuit.num_parameters())
        throw std::invalid_argument("expected " + std::to_string(circuit.num_parameters()) +
                                    " parameters, got " + std::to_string(params.size()));
    std::vector<Amplitude> amps = state.amplitudes();
    for (const CircuitGate& cg : circuit.gates()) {
        Gate g = cg.gate;
        if (cg.param >= 0) g.angle = params[static_cast<std::size_t>(cg.param)];
        apply_in_place(amps, g);
    }
    return StateVector(state.num_qubits(), std::move(amps));
}

ParameterizedCircuit inverse_circuit(const ParameterizedCircuit& circuit) {
    if (!circuit.fully_bound())
        throw std::invalid_argument("cannot invert a circuit with unbound parameters");
    ParameterizedCircuit out(circuit.num_qubits());
    const auto& gates = circuit.gates();
    for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
        Gate g = it->gate;
        if (g.kind == GateKind::RY || g.kind == GateKind::RZ || g.kind == GateKind::Phase)
            g.angle = -g.angle;
        out.push(g);
    }
    return out;
}

Amplitude inner_product(const StateVector& a, const StateVector& b) {
    if (a.num_qubits() != b.num_qubits())
        throw std::invalid_argument("inner_product dimension mismatch");
    Amplitude acc{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a.amplitude(i)) * b.amplitude(i);
    return acc;
}

std::vector<double> probabilities(const StateVector& state) {
    std::vector<double> p(state.size());
    for (std::size_t i = 0; i < state.size(); ++i) p[i] = std::norm(state.amplitude(i));
    return p;
}

}  // namespace qmlx::qsim
