#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "qmlx/classifier.hpp"

namespace qmlx::explain {

/// Retrains the model family on a (possibly column-reduced) training set.
/// Must be deterministic given its captured seed.
using Trainer =
    std::function<cml::ClassifierPtr(const Matrix& X_train, const std::vector<int>& y_train)>;

struct LooFeature {
    int feature = 0;
    double score_without = 0.0;
    double delta = 0.0;  // full_score - score_without
    std::string error;   // nonempty if retraining failed; run continues
};

struct LooReport {
    double full_score = 0.0;
    std::vector<LooFeature> per_feature;
};

/// Leave-one-out importance: retrain with each feature column removed from
/// both splits and score on the reduced test set.
LooReport loo_importance(const Trainer& trainer, const Matrix& X_train,
                         const std::vector<int>& y_train, const Matrix& X_test,
                         const std::vector<int>& y_test, int workers = 1);

struct PermutationFeature {
    int feature = 0;
    std::vector<double> scores;  // s_{k,j}, one per repeat
    double importance = 0.0;     // s - mean(scores)
    double stddev = 0.0;         // sample std of scores
};

struct PermutationReport {
    double baseline_score = 0.0;
    int repeats = 0;
    std::uint64_t seed = 0;
    std::vector<PermutationFeature> per_feature;
};

/// Shuffle-one-column importance on a held-out set, scored by accuracy. The
/// shuffle for (feature j, repeat k) is seeded from (seed, j, k); the input
/// matrix is never modified.
PermutationReport permutation_importance(const cml::Classifier& model, const Matrix& X_test,
                                         std::span<const int> y_test, int repeats,
                                         std::uint64_t seed, int workers = 1);

struct AleCurve {
    int feature = 0;
    int cls = 0;
    std::vector<double> edges;        // z_0 .. z_K (nearest-rank quantiles)
    std::vector<int> counts;          // n(k), size K
    std::vector<double> mean_diffs;   // per-interval average difference, size K
    std::vector<double> accumulated;  // uncentered ALE at the edges, size K+1
    std::vector<double> centered;     // accumulated minus the count-weighted mean
};

/// Accumulated local effects of one feature on one class probability.
AleCurve ale_curve(const cml::Classifier& model, const Matrix& X, int feature, int cls,
                   int num_intervals);

/// All features x classes in one pass over the model.
std::vector<AleCurve> ale_curves(const cml::Classifier& model, const Matrix& X,
                                 int num_intervals, int workers = 1);

/// Scalar importance per feature: the largest centered-curve range across
/// classes.
std::vector<double> ale_importance_from_curves(std::span<const AleCurve> curves,
                                               std::size_t num_features);
std::vector<double> ale_importance(const cml::Classifier& model, const Matrix& X,
                                   int num_intervals, int workers = 1);

struct ShapExplanation {
    std::vector<double> x;           // evaluated point
    std::vector<double> base_values; // v(empty set) per class
    std::vector<double> prediction;  // model probability of x per class
    Matrix phi;                      // [num_classes x p]
    std::string background_id;
};

/// Exact interventional Shapley values: enumerates all 2^p coalitions, with
/// v(S) the background-mean prediction of composites that take x on S.
/// Requires p <= 12.
ShapExplanation shap_exact(const cml::Classifier& model, std::span<const double> x,
                           const Matrix& background);

struct ShapGlobal {
    Matrix mean_abs_phi;         // [num_classes x p]
    std::vector<double> pooled;  // mean |phi| over samples and classes, size p
    std::vector<ShapExplanation> per_sample;
};

ShapGlobal shap_global(const cml::Classifier& model, const Matrix& X, const Matrix& background,
                       int workers = 1);

}  // namespace qmlx::explain
