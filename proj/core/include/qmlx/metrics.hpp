#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace qmlx::pipeline {

struct ClassMetrics {
    double precision = 0.0;  // 0 when the class is never predicted
    double recall = 0.0;
    double f1 = 0.0;
    int support = 0;
};

struct Misclassified {
    int test_index = 0;
    int true_label = 0;
    int predicted = 0;
};

struct EvaluationReport {
    double accuracy = 0.0;
    std::vector<ClassMetrics> per_class;
    std::vector<std::vector<int>> confusion;  // rows = true class
    std::vector<Misclassified> misclassified;
};

/// Classification report with the 0/0 -> 0 convention for precision/recall.
EvaluationReport evaluate(std::span<const int> y_true, std::span<const int> y_pred,
                          int num_classes);

struct BootstrapSummary {
    int resamples = 0;
    std::uint64_t seed = 0;
    double mean = 0.0;
    double p25 = 0.0;
    double p75 = 0.0;
    std::vector<double> scores;
};

/// Accuracy over resamples-with-replacement of (y_true, y_pred) pairs;
/// predictions are computed once by the caller. Percentiles use type-7
/// linear interpolation.
BootstrapSummary bootstrap_accuracy(std::span<const int> y_true, std::span<const int> y_pred,
                                    int resamples, std::uint64_t seed);

/// Type-7 quantile (linear interpolation) of already-sorted values.
double quantile_sorted(std::span<const double> sorted, double q);

}  // namespace qmlx::pipeline
