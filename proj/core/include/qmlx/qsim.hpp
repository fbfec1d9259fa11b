#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace qmlx::qsim {

using Amplitude = std::complex<double>;

/// Dense simulation bound; 2^20 amplitudes is the largest state we allow.
inline constexpr int kMaxQubits = 20;

enum class GateKind { H, RY, RZ, Phase, CX };

/// A concrete gate instance. Rotations and the phase gate carry an angle in
/// radians; CX carries a control qubit. Qubit ordering is little-endian
/// throughout: qubit 0 is the least-significant bit of the basis-state index.
struct Gate {
    GateKind kind = GateKind::H;
    int target = 0;
    int control = -1;  // CX only
    double angle = 0.0;

    static Gate h(int target) { return {GateKind::H, target, -1, 0.0}; }
    static Gate ry(int target, double angle) { return {GateKind::RY, target, -1, angle}; }
    static Gate rz(int target, double angle) { return {GateKind::RZ, target, -1, angle}; }
    static Gate phase(int target, double angle) { return {GateKind::Phase, target, -1, angle}; }
    static Gate cx(int control, int target) { return {GateKind::CX, target, control, 0.0}; }
};

const char* gate_name(GateKind kind);

/// Dense unitary of a bound gate, row-major: 2x2 for single-qubit kinds,
/// 4x4 for CX (basis order |control target> = |00>,|01>,|10>,|11>).
std::vector<Amplitude> gate_unitary(const Gate& gate);

class ParameterizedCircuit;

/// Immutable amplitude vector over the 2^n computational basis states.
class StateVector {
public:
    /// |0...0> on num_qubits qubits.
    static StateVector zero(int num_qubits);

    /// Validates the dimension and unit norm (1e-10).
    static StateVector from_amplitudes(int num_qubits, std::vector<Amplitude> amplitudes);

    int num_qubits() const { return num_qubits_; }
    std::size_t size() const { return amplitudes_.size(); }
    const std::vector<Amplitude>& amplitudes() const { return amplitudes_; }
    Amplitude amplitude(std::size_t index) const { return amplitudes_[index]; }

private:
    StateVector(int num_qubits, std::vector<Amplitude> amplitudes)
        : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {}

    int num_qubits_;
    std::vector<Amplitude> amplitudes_;

    friend StateVector apply_gate(const StateVector&, const Gate&);
    friend StateVector apply_circuit(const StateVector&, const ParameterizedCircuit&,
                                     std::span<const double>);
};

/// One slot in a circuit: a gate whose angle is either the stored constant
/// (param < 0) or comes from parameter vector entry `param`.
struct CircuitGate {
    Gate gate;
    int param = -1;
};

/// Ordered gate list with optional free angle parameters, indexed densely
/// 0..num_parameters-1 in the order they were added.
class ParameterizedCircuit {
public:
    ParameterizedCircuit() = default;
    explicit ParameterizedCircuit(int num_qubits);

    int num_qubits() const { return num_qubits_; }
    int num_parameters() const { return num_parameters_; }
    const std::vector<CircuitGate>& gates() const { return gates_; }
    std::size_t gate_count() const { return gates_.size(); }
    bool fully_bound() const { return num_parameters_ == 0; }

    /// Append a bound gate. Validates qubit indices.
    void push(const Gate& gate);
    /// Append a rotation/phase gate with a fresh parameter slot; returns the
    /// slot index.
    int push_parameterized(GateKind kind, int target);
    /// Append another circuit over the same qubits; its parameter slots are
    /// shifted past ours.
    void append(const ParameterizedCircuit& other);

    /// Resolve every parameter slot against `params`, yielding a circuit with
    /// zero free slots.
    ParameterizedCircuit bound(std::span<const double> params) const;

private:
    int num_qubits_ = 0;
    int num_parameters_ = 0;
    std::vector<CircuitGate> gates_;
};

StateVector apply_gate(const StateVector& state, const Gate& gate);

/// Sequential gate application; params must match circuit.num_parameters().
StateVector apply_circuit(const StateVector& state, const ParameterizedCircuit& circuit,
                          std::span<const double> params = {});

/// Adjoint of a fully bound circuit: gates reversed, rotation/phase angles
/// negated; H and CX are self-inverse.
ParameterizedCircuit inverse_circuit(const ParameterizedCircuit& circuit);

/// <a|b> = sum_i conj(a_i) b_i.
Amplitude inner_product(const StateVector& a, const StateVector& b);

/// p_i = |amplitude_i|^2.
std::vector<double> probabilities(const StateVector& state);

}  // namespace qmlx::qsim
