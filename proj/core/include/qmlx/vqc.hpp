#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "qmlx/classifier.hpp"
#include "qmlx/cobyla.hpp"
#include "qmlx/encode.hpp"

namespace qmlx::vqc {

enum class AnsatzKind { RealAmplitudes, EfficientSU2 };

const char* ansatz_name(AnsatzKind kind);
AnsatzKind parse_ansatz(const std::string& name);

struct AnsatzSpec {
    AnsatzKind kind = AnsatzKind::EfficientSU2;
    int num_qubits = 0;
    int reps = 3;
    encode::Entanglement entanglement = encode::Entanglement::Linear;

    /// RealAmplitudes: n*(reps+1); EfficientSU2: 2n*(reps+1).
    int num_parameters() const;
    void validate() const;
};

/// RealAmplitudes: an RY layer, then reps x (CX entangling layer + RY layer).
/// EfficientSU2: same structure with RY-then-RZ rotation layers. Parameter
/// slots are layer-major, qubit-minor.
qsim::ParameterizedCircuit build_ansatz(const AnsatzSpec& spec);

struct VqcConfig {
    encode::FeatureMapSpec feature_map;
    AnsatzSpec ansatz;
    OptimizerConfig optimizer;
    int num_classes = 2;
    std::uint64_t seed = 0;
    /// Basis index -> class. Empty = index modulo num_classes.
    std::vector<int> interpret_table;
};

/// Class assigned to a basis state under the config's interpret map.
int interpret_basis(std::size_t basis_index, const VqcConfig& config);

/// Variational classifier: feature map circuit followed by the trained
/// ansatz, with basis-state probabilities pooled per class through the
/// interpret map.
class VqcModel final : public cml::Classifier {
public:
    static VqcModel train(const Matrix& X, std::span<const int> y, const VqcConfig& config);

    std::string kind() const override { return "vqc"; }
    int num_classes() const override { return config_.num_classes; }
    std::vector<double> predict_proba(std::span<const double> x) const override;

    int interpret(std::size_t basis_index) const;
    const std::vector<double>& params() const { return params_; }
    const std::vector<double>& training_log() const { return training_log_; }
    const VqcConfig& config() const { return config_; }

    VqcModel(VqcConfig config, std::vector<double> params, std::vector<double> training_log);

private:
    VqcConfig config_;
    std::vector<double> params_;
    std::vector<double> training_log_;
    qsim::ParameterizedCircuit ansatz_circuit_;
};

/// Mean categorical cross-entropy of per-row class probabilities against
/// integer labels, with probabilities clamped to [1e-12, 1].
double cross_entropy(const Matrix& probas, std::span<const int> y);

/// Cross-entropy of the model's forward pass over (X, y).
double vqc_loss(const VqcModel& model, const Matrix& X, std::span<const int> y);

struct GridSearchRow {
    AnsatzKind ansatz = AnsatzKind::RealAmplitudes;
    int reps = 1;
    OptimizerKind optimizer = OptimizerKind::Cobyla;
    double accuracy = 0.0;
    double seconds = 0.0;
    std::string error;  // empty on success
};

/// Trains every (ansatz kind x reps x optimizer) combination on the same
/// split and seed; individual failures are recorded in the row, not thrown.
std::vector<GridSearchRow> grid_search(const Matrix& X_train, std::span<const int> y_train,
                                       const Matrix& X_test, std::span<const int> y_test,
                                       const VqcConfig& base, std::span<const int> reps_grid);

void write_grid_csv(std::span<const GridSearchRow> rows, std::ostream& out);

}  // namespace qmlx::vqc
