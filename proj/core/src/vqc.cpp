#include "qmlx/vqc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "qmlx/rng.hpp"

namespace qmlx::vqc {

using qsim::Gate;
using qsim::GateKind;
using qsim::ParameterizedCircuit;
using qsim::StateVector;

const char* ansatz_name(AnsatzKind kind) {
    switch (kind) {
        case AnsatzKind::RealAmplitudes: return "real_amplitudes";
        case AnsatzKind::EfficientSU2: return "efficient_su2";
    }
    return "?";
}

AnsatzKind parse_ansatz(const std::string& name) {
    if (name == "real_amplitudes" || name == "RealAmplitudes") return AnsatzKind::RealAmplitudes;
    if (name == "efficient_su2" || name == "EfficientSU2") return AnsatzKind::EfficientSU2;
    throw std::invalid_argument("unknown ansatz '" + name +
                                "' (real_amplitudes|efficient_su2)");
}

void AnsatzSpec::validate() const {
    if (num_qubits < 1 || num_qubits > qsim::kMaxQubits)
        throw std::invalid_argument("ansatz num_qubits out of range");
    if (reps < 1) throw std::invalid_argument("ansatz reps must be >= 1");
}

int AnsatzSpec::num_parameters() const {
    const int per_layer = kind == AnsatzKind::EfficientSU2 ? 2 * num_qubits : num_qubits;
    return per_layer * (reps + 1);
}

ParameterizedCircuit build_ansatz(const AnsatzSpec& spec) {
    spec.validate();
    ParameterizedCircuit circuit(spec.num_qubits);
    const auto rotation_layer = [&] {
        for (int q = 0; q < spec.num_qubits; ++q) circuit.push_parameterized(GateKind::RY, q);
        if (spec.kind == AnsatzKind::EfficientSU2)
            for (int q = 0; q < spec.num_qubits; ++q) circuit.push_parameterized(GateKind::RZ, q);
    };
    const auto pairs = encode::entangled_pairs(spec.num_qubits, spec.entanglement);

    rotation_layer();
    for (int rep = 0; rep < spec.reps; ++rep) {
        for (const auto& [control, target] : pairs) circuit.push(Gate::cx(control, target));
        rotation_layer();
    }
    return circuit;
}

VqcModel::VqcModel(VqcConfig config, std::vector<double> params, std::vector<double> training_log)
    : config_(std::move(config)),
      params_(std::move(params)),
      training_log_(std::move(training_log)),
      ansatz_circuit_(build_ansatz(config_.ansatz)) {
    if (static_cast<int>(params_.size()) != config_.ansatz.num_parameters())
        throw std::invalid_argument("VqcModel: parameter count does not match the ansatz");
    if (config_.num_classes < 2) throw std::invalid_argument("VqcModel: need >= 2 classes");
    if (!config_.interpret_table.empty()) {
        const std::size_t dim = std::size_t{1} << config_.feature_map.num_features;
        if (config_.interpret_table.size() != dim)
            throw std::invalid_argument("VqcModel: interpret table must cover all basis states");
        std::vector<bool> seen(static_cast<std::size_t>(config_.num_classes), false);
        for (int c : config_.interpret_table) {
            if (c < 0 || c >= config_.num_classes)
                throw std::invalid_argument("VqcModel: interpret table class out of range");
            seen[static_cast<std::size_t>(c)] = true;
        }
        for (bool s : seen)
            if (!s) throw std::invalid_argument("VqcModel: interpret table misses a class");
    }
}

int interpret_basis(std::size_t basis_index, const VqcConfig& config) {
    if (config.interpret_table.empty())
        return static_cast<int>(basis_index % static_cast<std::size_t>(config.num_classes));
    return config.interpret_table[basis_index];
}

int VqcModel::interpret(std::size_t basis_index) const {
    return interpret_basis(basis_index, config_);
}

std::vector<double> VqcModel::predict_proba(std::span<const double> x) const {
    const auto feature_circuit = encode::zz_feature_map(config_.feature_map, x);
    StateVector state = apply_circuit(StateVector::zero(config_.feature_map.num_features),
                                      feature_circuit);
    state = apply_circuit(state, ansatz_circuit_, params_);
    std::vector<double> out(static_cast<std::size_t>(config_.num_classes), 0.0);
    for (std::size_t i = 0; i < state.size(); ++i)
        out[static_cast<std::size_t>(interpret(i))] += std::norm(state.amplitude(i));
    return out;
}

double cross_entropy(const Matrix& probas, std::span<const int> y) {
    if (probas.rows() != y.size()) throw std::invalid_argument("cross_entropy: size mismatch");
    double loss = 0.0;
    for (std::size_t i = 0; i < probas.rows(); ++i) {
        double p = probas.at(i, static_cast<std::size_t>(y[i]));
        p = std::min(1.0, std::max(1e-12, p));
        loss -= std::log(p);
    }
    return loss / static_cast<double>(probas.rows());
}

double vqc_loss(const VqcModel& model, const Matrix& X, std::span<const int> y) {
    return cross_entropy(model.predict_proba_batch(X), y);
}

VqcModel VqcModel::train(const Matrix& X, std::span<const int> y, const VqcConfig& config) {
    config.feature_map.validate();
    config.ansatz.validate();
    config.optimizer.validate();
    if (config.ansatz.num_qubits != config.feature_map.num_features)
        throw std::invalid_argument("VqcModel::train: ansatz and feature map qubit counts differ");
    if (X.cols() != static_cast<std::size_t>(config.feature_map.num_features))
        throw std::invalid_argument("VqcModel::train: feature arity mismatch");
    for (int label : y)
        if (label < 0 || label >= config.num_classes)
            throw std::invalid_argument("VqcModel::train: label out of range");

    // Feature-map states are fixed during training; cache them once.
    std::vector<StateVector> encoded;
    encoded.reserve(X.rows());
    for (std::size_t i = 0; i < X.rows(); ++i)
        encoded.push_back(encode::zz_feature_state(config.feature_map, X.row(i)));

    const ParameterizedCircuit ansatz_circuit = build_ansatz(config.ansatz);

    const auto objective = [&](std::span<const double> params) {
        double loss = 0.0;
        for (std::size_t i = 0; i < encoded.size(); ++i) {
            const StateVector state = apply_circuit(encoded[i], ansatz_circuit, params);
            double p = 0.0;
            for (std::size_t b = 0; b < state.size(); ++b)
                if (interpret_basis(b, config) == y[i]) p += std::norm(state.amplitude(b));
            p = std::min(1.0, std::max(1e-12, p));
            loss -= std::log(p);
        }
        return loss / static_cast<double>(encoded.size());
    };

    constexpr double pi = std::numbers::pi;
    Rng rng(config.seed);
    std::vector<double> x0(static_cast<std::size_t>(config.ansatz.num_parameters()));
    for (double& v : x0) v = rng.uniform(-pi, pi);

    const CobylaResult result = cobyla_minimize(objective, x0, config.optimizer);
    return VqcModel(config, result.x, result.trace);
}

std::vector<GridSearchRow> grid_search(const Matrix& X_train, std::span<const int> y_train,
                                       const Matrix& X_test, std::span<const int> y_test,
                                       const VqcConfig& base, std::span<const int> reps_grid) {
    std::vector<GridSearchRow> rows;
    for (const AnsatzKind kind : {AnsatzKind::RealAmplitudes, AnsatzKind::EfficientSU2}) {
        for (const int reps : reps_grid) {
            for (const OptimizerKind opt : {OptimizerKind::Cobyla}) {
                GridSearchRow row;
                row.ansatz = kind;
                row.reps = reps;
                row.optimizer = opt;
                const auto start = std::chrono::steady_clock::now();
                try {
                    VqcConfig config = base;
                    config.ansatz.kind = kind;
                    config.ansatz.reps = reps;
                    config.optimizer.kind = opt;
                    const VqcModel model = VqcModel::train(X_train, y_train, config);
                    row.accuracy = model.accuracy(X_test, y_test);
                } catch (const std::exception& e) {
                    row.error = e.what();
                }
                row.seconds =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                        .count();
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

void write_grid_csv(std::span<const GridSearchRow> rows, std::ostream& out) {
    out << "ansatz,reps,optimizer,accuracy,seconds\n";
    out.precision(17);
    for (const GridSearchRow& row : rows) {
        out << ansatz_name(row.ansatz) << ',' << row.reps << ',' << optimizer_name(row.optimizer)
            << ',';
        if (row.error.empty()) out << row.accuracy;
        else out << "error";
        out << ',' << row.seconds << '\n';
    }
}

}  // namespace qmlx::vqc
