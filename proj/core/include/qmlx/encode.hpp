#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qmlx/qsim.hpp"

namespace qmlx::encode {

enum class Entanglement { Linear, Full };
enum class RotationAxis { Y, Z };

const char* entanglement_name(Entanglement e);
Entanglement parse_entanglement(const std::string& name);

/// Qubit pairs coupled by an entangling layer. Linear: (0,1),(1,2),...;
/// full: every i<j in lexicographic order.
std::vector<std::pair<int, int>> entangled_pairs(int num_qubits, Entanglement entanglement);

/// Second-order Pauli-Z feature map configuration. One qubit per feature;
/// the data map is fixed to phi_i(x) = x_i, phi_ij(x) = (pi - x_i)(pi - x_j).
struct FeatureMapSpec {
    int num_features = 0;
    int reps = 2;
    Entanglement entanglement = Entanglement::Linear;

    void validate() const;
};

/// Computational basis state indexed by the bits (little-endian).
qsim::StateVector basis_encode(std::span<const int> bits);

/// x zero-padded to the next power of two (at least 2) and divided by its
/// Euclidean norm.
qsim::StateVector amplitude_encode(std::span<const double> x);

/// One rotation per qubit with angle x_i, about the chosen axis.
qsim::ParameterizedCircuit angle_encode(std::span<const double> x, RotationAxis axis);

/// Fully bound ZZ feature map circuit U(x): per repetition, H on every qubit,
/// a phase of 2*x_i on each qubit, and for every entangled pair (i,j) the
/// sequence CX(i->j), Phase(2*(pi-x_i)(pi-x_j)) on j, CX(i->j).
qsim::ParameterizedCircuit zz_feature_map(const FeatureMapSpec& spec, std::span<const double> x);

/// U(x) applied to |0...0>.
qsim::StateVector zz_feature_state(const FeatureMapSpec& spec, std::span<const double> x);

}  // namespace qmlx::encode
