#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qmlx/classifier.hpp"
#include "qmlx/qkernel.hpp"

namespace qmlx::cml {

/// exp(-gamma * ||a - b||^2).
double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma);

/// scikit-style "scale" default: 1 / (p * Var(X)) over all entries of X.
double rbf_gamma_scale(const Matrix& X);

/// Soft-margin binary SVM in dual form. support_indices refer to the rows of
/// the Gram matrix the model was trained on.
struct SvmBinaryModel {
    std::vector<int> support_indices;
    std::vector<double> alphas;       // 0 < alpha_i <= C
    std::vector<int> support_labels;  // -1/+1, aligned with support_indices
    double bias = 0.0;
    double C = 1.0;
    int iterations = 0;
    double kkt_violation = 0.0;  // at termination
};

struct SmoConfig {
    double C = 1.0;
    double tolerance = 1e-3;
    int max_iterations = 100000;
};

/// SMO with maximal-violating-pair selection on the dual of the soft-margin
/// problem. K must be symmetric PSD; y entries in {-1,+1} with both classes
/// present. Keeps 0 <= alpha <= C and sum(alpha_i y_i) = 0 throughout.
SvmBinaryModel svm_train_binary(const qkernel::KernelMatrix& K, std::span<const int> y,
                                const SmoConfig& config);

/// f(x) = sum_i alpha_i y_i k(x, x_i) + b, with k_row aligned to
/// support_indices.
double svm_decision(const SvmBinaryModel& model, std::span<const double> k_row);

/// Dual objective sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij of a
/// trained model (used for solver diagnostics and oracle comparisons).
double svm_dual_objective(const SvmBinaryModel& model, const qkernel::KernelMatrix& K);

/// One-vs-one multiclass layer over binary SVMs, trained on a precomputed
/// Gram matrix. Prediction-side kernels are supplied by the owner (RBF for
/// the SVC, fidelity kernel for the QSVC).
struct OvoSvm {
    struct Pair {
        int class_a = 0;  // binary label +1
        int class_b = 0;  // binary label -1
        SvmBinaryModel model;
    };
    int num_classes = 0;
    std::vector<Pair> pairs;
};

OvoSvm ovo_train(const qkernel::KernelMatrix& K, std::span<const int> y, int num_classes,
                 const SmoConfig& config);

/// Class scores from one kernel row against the full training set. Each entry
/// is votes_c plus a logistic squash of the summed decision values, so the
/// argmax is the majority-vote winner with ties broken by summed decisions.
std::vector<double> ovo_scores(const OvoSvm& ovo, std::span<const double> k_row_full);

/// softmax(scores), temperature 1.
std::vector<double> softmax(std::span<const double> scores);

struct SvcConfig {
    double C = 1.0;
    double gamma = 0.0;  // 0 = "scale": 1/(p * Var(X_train))
};

/// Kernel SVM with an RBF kernel, one-vs-one multiclass.
class SvcModel final : public Classifier {
public:
    static SvcModel train(const Matrix& X, std::span<const int> y, int num_classes,
                          const SvcConfig& config);

    std::string kind() const override { return "svc"; }
    int num_classes() const override { return ovo_.num_classes; }
    std::vector<double> predict_proba(std::span<const double> x) const override;

    double gamma() const { return gamma_; }
    const SvcConfig& config() const { return config_; }
    const OvoSvm& ovo() const { return ovo_; }
    const Matrix& train_X() const { return train_X_; }

    SvcModel(Matrix train_X, OvoSvm ovo, double gamma, SvcConfig config)
        : train_X_(std::move(train_X)), ovo_(std::move(ovo)), gamma_(gamma), config_(config) {}

private:
    Matrix train_X_;
    OvoSvm ovo_;
    double gamma_ = 0.0;
    SvcConfig config_;
};

struct QsvcConfig {
    encode::FeatureMapSpec feature_map;
    double C = 1.0;
};

/// Kernel SVM over the fidelity quantum kernel. Training Gram entries come
/// from the compute-uncompute route; prediction rows are inner products
/// against cached encoded training states (equal within 1e-10).
class QsvcModel final : public Classifier {
public:
    static QsvcModel train(const Matrix& X, std::span<const int> y, int num_classes,
                           const QsvcConfig& config, int workers = 1);

    std::string kind() const override { return "qsvc"; }
    int num_classes() const override { return ovo_.num_classes; }
    std::vector<double> predict_proba(std::span<const double> x) const override;

    const QsvcConfig& config() const { return config_; }
    const OvoSvm& ovo() const { return ovo_; }
    const Matrix& train_X() const { return train_X_; }

    QsvcModel(Matrix train_X, OvoSvm ovo, QsvcConfig config);

private:
    Matrix train_X_;
    OvoSvm ovo_;
    QsvcConfig config_;
    std::vector<qsim::StateVector> train_states_;
};

}  // namespace qmlx::cml
