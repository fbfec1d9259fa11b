#include "qmlx/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qmlx/rng.hpp"

namespace qmlx::pipeline {

EvaluationReport evaluate(std::span<const int> y_true, std::span<const int> y_pred,
                          int num_classes) {
    if (y_true.size() != y_pred.size())
        throw std::invalid_argument("evaluate: prediction count mismatch");
    if (y_true.empty()) throw std::invalid_argument("evaluate: empty test set");

    EvaluationReport report;
    report.confusion.assign(static_cast<std::size_t>(num_classes),
                            std::vector<int>(static_cast<std::size_t>(num_classes), 0));
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        report.confusion[static_cast<std::size_t>(y_true[i])]
                        [static_cast<std::size_t>(y_pred[i])] += 1;
        if (y_true[i] != y_pred[i])
            report.misclassified.push_back({static_cast<int>(i), y_true[i], y_pred[i]});
    }

    int correct = 0;
    report.per_class.resize(static_cast<std::size_t>(num_classes));
    for (int c = 0; c < num_classes; ++c) {
        const std::size_t cc = static_cast<std::size_t>(c);
        int tp = report.confusion[cc][cc];
        int row_sum = 0, col_sum = 0;
        for (int k = 0; k < num_classes; ++k) {
            row_sum += report.confusion[cc][static_cast<std::size_t>(k)];
            col_sum += report.confusion[static_cast<std::size_t>(k)][cc];
        }
        correct += tp;
        ClassMetrics& m = report.per_class[cc];
        m.support = row_sum;
        m.precision = col_sum > 0 ? static_cast<double>(tp) / col_sum : 0.0;
        m.recall = row_sum > 0 ? static_cast<double>(tp) / row_sum : 0.0;
        m.f1 = (m.precision + m.recall) > 0.0
                   ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                   : 0.0;
    }
    report.accuracy = static_cast<double>(correct) / static_cast<double>(y_true.size());
    return report;
}

double quantile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
    const double h = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

BootstrapSummary bootstrap_accuracy(std::span<const int> y_true, std::span<const int> y_pred,
                                    int resamples, std::uint64_t seed) {
    if (y_true.empty()) throw std::invalid_argument("bootstrap_accuracy: empty test set");
    if (y_true.size() != y_pred.size())
        throw std::invalid_argument("bootstrap_accuracy: prediction count mismatch");
    if (resamples < 1) throw std::invalid_argument("bootstrap_accuracy: resamples must be >= 1");

    BootstrapSummary summary;
    summary.resamples = resamples;
    summary.seed = seed;
    summary.scores.resize(static_cast<std::size_t>(resamples));

    const std::size_t n = y_true.size();
    Rng rng(seed);
    for (int r = 0; r < resamples; ++r) {
        std::size_t hits = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t pick = static_cast<std::size_t>(rng.below(n));
            if (y_true[pick] == y_pred[pick]) ++hits;
        }
        summary.scores[static_cast<std::size_t>(r)] =
            static_cast<double>(hits) / static_cast<double>(n);
    }

    double mean = 0.0;
    for (double s : summary.scores) mean += s;
    summary.mean = mean / static_cast<double>(resamples);

    std::vector<double> sorted = summary.scores;
    std::sort(sorted.begin(), sorted.end());
    summary.p25 = quantile_sorted(sorted, 0.25);
    summary.p75 = quantile_sorted(sorted, 0.75);
    return summary;
}

}  // namespace qmlx::pipeline
