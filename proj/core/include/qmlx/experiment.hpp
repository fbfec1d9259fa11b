#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmlx/dataset.hpp"
#include "qmlx/explain.hpp"
#include "qmlx/forest.hpp"
#include "qmlx/metrics.hpp"
#include "qmlx/rng.hpp"
#include "qmlx/svm.hpp"
#include "qmlx/vqc.hpp"

namespace qmlx::pipeline {

struct SplitSection {
    double test_fraction = 0.2;
    SplitMode mode = SplitMode::Stratified;
    std::optional<std::uint64_t> seed;  // default: master seed
};

struct QsvcSection {
    int featuremap_reps = 2;
    encode::Entanglement featuremap_entanglement = encode::Entanglement::Linear;
    double C = 1.0;
};

struct RfSection {
    int trees = 100;
    int min_leaf = 1;
    int max_depth = 0;          // 0 = unlimited
    int feature_subsample = 0;  // 0 = round(sqrt(p))
    std::optional<std::uint64_t> seed;
};

struct VqcSection {
    vqc::AnsatzKind ansatz = vqc::AnsatzKind::EfficientSU2;
    int reps = 3;
    encode::Entanglement entanglement = encode::Entanglement::Linear;
    int featuremap_reps = 2;
    encode::Entanglement featuremap_entanglement = encode::Entanglement::Linear;
    vqc::OptimizerConfig optimizer;  // COBYLA, max_iters 500, radii 1.0 -> 1e-4
    std::optional<std::uint64_t> seed;
};

struct ExplainSection {
    int perm_repeats = 30;
    int ale_intervals = 10;
    int shap_background = 100;  // background rows, subsampled from train when larger
};

struct ExperimentConfig {
    std::uint64_t seed = 42;
    SplitSection split;
    cml::SvcConfig svc;  // C = 1, gamma = 0 (scale)
    QsvcSection qsvc;
    RfSection rf;
    VqcSection vqc;
    ExplainSection explain;
    std::vector<std::string> models = {"svc", "qsvc", "rf", "vqc"};
    int workers = 0;  // 0 = auto

    std::uint64_t split_seed() const { return split.seed.value_or(seed); }
    std::uint64_t rf_seed() const { return rf.seed.value_or(derive_seed(seed, 11)); }
    std::uint64_t vqc_seed() const { return vqc.seed.value_or(derive_seed(seed, 12)); }
    std::uint64_t permutation_seed() const { return derive_seed(seed, 13); }
    std::uint64_t shap_background_seed() const { return derive_seed(seed, 14); }
    std::uint64_t bootstrap_seed() const { return derive_seed(seed, 15); }
    int effective_workers() const;
};

/// Overlay a JSON document (the spec'd config schema) onto the defaults.
ExperimentConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const ExperimentConfig& config);
/// fnv1a64 of the canonical config dump; embedded in every report.
std::string config_hash(const ExperimentConfig& config);

/// One experiment on one dataset: split, scale, train, evaluate, explain.
/// Stages write JSON reports and plot-ready CSVs under an output directory;
/// failures of independent stages are recorded rather than fatal.
class Experiment {
public:
    Experiment(ExperimentConfig config, Dataset dataset);

    /// Split and scale. Must run before any other stage.
    void prepare();

    void train_models();
    void save_models(const std::string& out_dir);
    /// Restore models and the split from a previous train run.
    void load_models(const std::string& out_dir);

    void evaluate_models(const std::string& out_dir);
    void explain_models(const std::string& out_dir);
    void write_kernel_csvs(const std::string& out_dir);
    void run_grid_search(const std::string& out_dir);

    /// The whole pipeline: train + evaluate + explain + manifest.
    void run_all(const std::string& out_dir);

    void write_split(const std::string& out_dir) const;
    void write_manifest(const std::string& out_dir) const;

    const ExperimentConfig& config() const { return config_; }
    const Dataset& dataset() const { return dataset_; }
    const SplitIndices& split() const { return split_; }
    const Matrix& train_X() const { return train_X_; }
    const Matrix& test_X() const { return test_X_; }
    const std::vector<int>& train_y() const { return train_y_; }
    const std::vector<int>& test_y() const { return test_y_; }
    const std::map<std::string, cml::ClassifierPtr>& models() const { return models_; }

    /// Trainer closure for LOO retraining (arity-aware: quantum models shrink
    /// their feature maps to the reduced column count).
    explain::Trainer trainer_for(const std::string& kind) const;

private:
    void record_stage(const std::string& name, const std::string& status, double seconds,
                      const std::string& error = "");
    nlohmann::json report_header(const std::string& model_kind) const;
    void write_report(const std::string& out_dir, const std::string& name,
                      const nlohmann::json& body) const;

    ExperimentConfig config_;
    Dataset dataset_;
    SplitIndices split_;
    ScalerModel scaler_;
    Matrix train_X_, test_X_;
    std::vector<int> train_y_, test_y_;
    std::map<std::string, cml::ClassifierPtr> models_;
    nlohmann::json stages_ = nlohmann::json::array();
    bool prepared_ = false;
};

/// Subsample up to `limit` rows with a seeded draw (without replacement),
/// preserving row order; returns the input when it is small enough.
Matrix subsample_rows(const Matrix& X, std::size_t limit, std::uint64_t seed);

}  // namespace qmlx::pipeline
