#include "qmlx/explain.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "qmlx/rng.hpp"

namespace qmlx::explain {

LooReport loo_importance(const Trainer& trainer, const Matrix& X_train,
                         const std::vector<int>& y_train, const Matrix& X_test,
                         const std::vector<int>& y_test, int workers) {
    if (X_train.cols() < 2)
        throw std::invalid_argument("loo_importance: need at least two features");

    LooReport report;
    {
        const cml::ClassifierPtr full = trainer(X_train, y_train);
        report.full_score = full->accuracy(X_test, y_test);
    }
    report.per_feature.resize(X_train.cols());
    parallel_for(X_train.cols(), workers, [&](std::size_t j) {
        LooFeature& out = report.per_feature[j];
        out.feature = static_cast<int>(j);
        try {
            const Matrix train_j = X_train.drop_column(j);
            const Matrix test_j = X_test.drop_column(j);
            const cml::ClassifierPtr model = trainer(train_j, y_train);
            out.score_without = model->accuracy(test_j, y_test);
            out.delta = report.full_score - out.score_without;
        } catch (const std::exception& e) {
            out.error = e.what();
        }
    });
    return report;
}

PermutationReport permutation_importance(const cml::Classifier& model, const Matrix& X_test,
                                         std::span<const int> y_test, int repeats,
                                         std::uint64_t seed, int workers) {
    if (repeats < 1) throw std::invalid_argument("permutation_importance: repeats must be >= 1");
    if (X_test.rows() != y_test.size())
        throw std::invalid_argument("permutation_importance: label count mismatch");

    PermutationReport report;
    report.repeats = repeats;
    report.seed = seed;
    report.baseline_score = model.accuracy(X_test, y_test);
    report.per_feature.resize(X_test.cols());

    const std::size_t total = X_test.cols() * static_cast<std::size_t>(repeats);
    Matrix scores(X_test.cols(), static_cast<std::size_t>(repeats));
    parallel_for(total, workers, [&](std::size_t item) {
        const std::size_t j = item / static_cast<std::size_t>(repeats);
        const std::size_t k = item % static_cast<std::size_t>(repeats);
        Rng rng(derive_seed(seed, j, k));
        Matrix corrupted = X_test;
        std::vector<double> column = corrupted.column(j);
        rng.shuffle(column);
        for (std::size_t r = 0; r < corrupted.rows(); ++r) corrupted.at(r, j) = column[r];
        scores.at(j, k) = model.accuracy(corrupted, y_test);
    });

    for (std::size_t j = 0; j < X_test.cols(); ++j) {
        PermutationFeature& out = report.per_feature[j];
        out.feature = static_cast<int>(j);
        out.scores.assign(scores.row(j).begin(), scores.row(j).end());
        double mean = 0.0;
        for (double s : out.scores) mean += s;
        mean /= static_cast<double>(repeats);
        out.importance = report.baseline_score - mean;
        double var = 0.0;
        for (double s : out.scores) var += (s - mean) * (s - mean);
        out.stddev = repeats > 1 ? std::sqrt(var / static_cast<double>(repeats - 1)) : 0.0;
    }
    return report;
}

namespace {

/// Nearest-rank quantile edges: actual data values, so the grid commutes with
/// monotone feature rescaling. Duplicates collapse.
std::vector<double> quantile_edges(std::vector<double> values, int num_intervals) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    std::vector<double> edges;
    edges.push_back(values.front());
    for (int k = 1; k <= num_intervals; ++k) {
        const std::size_t rank = static_cast<std::size_t>(
            std::ceil(static_cast<double>(k) * static_cast<double>(n) /
                      static_cast<double>(num_intervals)));
        const double edge = values[std::min(n, std::max<std::size_t>(rank, 1)) - 1];
        if (edge > edges.back()) edges.push_back(edge);
    }
    return edges;
}

}  // namespace

std::vector<AleCurve> ale_curves(const cml::Classifier& model, const Matrix& X,
                                 int num_intervals, int workers) {
    if (num_intervals < 2) throw std::invalid_argument("ale_curves: need >= 2 intervals");
    if (X.rows() == 0) throw std::invalid_argument("ale_curves: empty data");
    const int num_classes = model.num_classes();
    std::vector<std::vector<AleCurve>> per_feature(X.cols());

    parallel_for(X.cols(), workers, [&](std::size_t j) {
        const std::vector<double> column = X.column(j);
        const std::vector<double> edges = quantile_edges(column, num_intervals);
        if (edges.size() < 2)
            throw std::invalid_argument("ale_curves: feature " + std::to_string(j) +
                                        " is constant");
        const std::size_t K = edges.size() - 1;

        // Right-closed binning: interval k covers (z_{k-1}, z_k], the first
        // one starts at the feature minimum.
        const auto interval_of = [&](double v) {
            const std::size_t k = static_cast<std::size_t>(
                std::lower_bound(edges.begin() + 1, edges.end(), v) - (edges.begin() + 1));
            return std::min(k, K - 1);  // k indexes 0..K-1
        };

        std::vector<int> counts(K, 0);
        Matrix diff_sums(K, static_cast<std::size_t>(num_classes));
        std::vector<double> probe(X.cols());
        for (std::size_t i = 0; i < X.rows(); ++i) {
            const std::size_t k = interval_of(X.at(i, j));
            ++counts[k];
            for (std::size_t c = 0; c < X.cols(); ++c) probe[c] = X.at(i, c);
            probe[j] = edges[k + 1];
            const std::vector<double> hi = model.predict_proba(probe);
            probe[j] = edges[k];
            const std::vector<double> lo = model.predict_proba(probe);
            for (int c = 0; c < num_classes; ++c)
                diff_sums.at(k, static_cast<std::size_t>(c)) +=
                    hi[static_cast<std::size_t>(c)] - lo[static_cast<std::size_t>(c)];
        }

        std::vector<AleCurve>& curves = per_feature[j];
        curves.resize(static_cast<std::size_t>(num_classes));
        for (int c = 0; c < num_classes; ++c) {
            AleCurve& curve = curves[static_cast<std::size_t>(c)];
            curve.feature = static_cast<int>(j);
            curve.cls = c;
            curve.edges = edges;
            curve.counts = counts;
            curve.mean_diffs.resize(K, 0.0);
            for (std::size_t k = 0; k < K; ++k)
                if (counts[k] > 0)
                    curve.mean_diffs[k] = diff_sums.at(k, static_cast<std::size_t>(c)) /
                                          static_cast<double>(counts[k]);

            curve.accumulated.resize(K + 1, 0.0);
            for (std::size_t k = 0; k < K; ++k)
                curve.accumulated[k + 1] = curve.accumulated[k] + curve.mean_diffs[k];

            // Center on the data distribution: each sample sits at its
            // interval's right edge, so the weights are the counts.
            double weighted = 0.0;
            for (std::size_t k = 0; k < K; ++k)
                weighted += static_cast<double>(counts[k]) * curve.accumulated[k + 1];
            weighted /= static_cast<double>(X.rows());
            curve.centered.resize(K + 1);
            for (std::size_t k = 0; k <= K; ++k)
                curve.centered[k] = curve.accumulated[k] - weighted;
        }
    });

    std::vector<AleCurve> out;
    for (auto& group : per_feature)
        for (auto& curve : group) out.push_back(std::move(curve));
    return out;
}

AleCurve ale_curve(const cml::Classifier& model, const Matrix& X, int feature, int cls,
                   int num_intervals) {
    if (feature < 0 || static_cast<std::size_t>(feature) >= X.cols())
        throw std::out_of_range("ale_curve: feature index out of range");
    if (cls < 0 || cls >= model.num_classes())
        throw std::out_of_range("ale_curve: class index out of range");
    const std::vector<AleCurve> all = ale_curves(model, X, num_intervals, 1);
    for (const AleCurve& curve : all)
        if (curve.feature == feature && curve.cls == cls) return curve;
    throw std::logic_error("ale_curve: curve not produced");
}

std::vector<double> ale_importance_from_curves(std::span<const AleCurve> curves,
                                               std::size_t num_features) {
    std::vector<double> importance(num_features, 0.0);
    for (const AleCurve& curve : curves) {
        const auto [lo, hi] = std::minmax_element(curve.centered.begin(), curve.centered.end());
        importance[static_cast<std::size_t>(curve.feature)] =
            std::max(importance[static_cast<std::size_t>(curve.feature)], *hi - *lo);
    }
    return importance;
}

std::vector<double> ale_importance(const cml::Classifier& model, const Matrix& X,
                                   int num_intervals, int workers) {
    return ale_importance_from_curves(ale_curves(model, X, num_intervals, workers), X.cols());
}

ShapExplanation shap_exact(const cml::Classifier& model, std::span<const double> x,
                           const Matrix& background) {
    const std::size_t p = x.size();
    if (p == 0 || p > 12)
        throw std::invalid_argument("shap_exact: supports 1..12 features (2^p coalitions)");
    if (background.rows() == 0) throw std::invalid_argument("shap_exact: empty background");
    if (background.cols() != p)
        throw std::invalid_argument("shap_exact: background arity mismatch");

    const int num_classes = model.num_classes();
    const std::size_t coalitions = std::size_t{1} << p;

    // v[S][c]: background-mean probability of class c when features in S are
    // pinned to x and the rest come from the background row.
    Matrix v(coalitions, static_cast<std::size_t>(num_classes));
    std::vector<double> composite(p);
    for (std::size_t mask = 0; mask < coalitions; ++mask) {
        for (std::size_t b = 0; b < background.rows(); ++b) {
            for (std::size_t i = 0; i < p; ++i)
                composite[i] = (mask >> i) & 1 ? x[i] : background.at(b, i);
            const std::vector<double> proba = model.predict_proba(composite);
            for (int c = 0; c < num_classes; ++c)
                v.at(mask, static_cast<std::size_t>(c)) += proba[static_cast<std::size_t>(c)];
        }
        for (int c = 0; c < num_classes; ++c)
            v.at(mask, static_cast<std::size_t>(c)) /= static_cast<double>(background.rows());
    }

    // w(s) = s! (p-1-s)! / p!
    std::vector<double> weight(p, 0.0);
    {
        std::vector<double> factorial(p + 1, 1.0);
        for (std::size_t i = 1; i <= p; ++i)
            factorial[i] = factorial[i - 1] * static_cast<double>(i);
        for (std::size_t s = 0; s < p; ++s)
            weight[s] = factorial[s] * factorial[p - 1 - s] / factorial[p];
    }

    ShapExplanation out;
    out.x.assign(x.begin(), x.end());
    out.phi = Matrix(static_cast<std::size_t>(num_classes), p);
    out.base_values.resize(static_cast<std::size_t>(num_classes));
    out.prediction.resize(static_cast<std::size_t>(num_classes));
    for (int c = 0; c < num_classes; ++c) {
        out.base_values[static_cast<std::size_t>(c)] = v.at(0, static_cast<std::size_t>(c));
        out.prediction[static_cast<std::size_t>(c)] =
            v.at(coalitions - 1, static_cast<std::size_t>(c));
    }

    for (std::size_t i = 0; i < p; ++i) {
        const std::size_t bit = std::size_t{1} << i;
        for (std::size_t mask = 0; mask < coalitions; ++mask) {
            if (mask & bit) continue;
            const double w = weight[static_cast<std::size_t>(std::popcount(mask))];
            for (int c = 0; c < num_classes; ++c)
                out.phi.at(static_cast<std::size_t>(c), i) +=
                    w * (v.at(mask | bit, static_cast<std::size_t>(c)) -
                         v.at(mask, static_cast<std::size_t>(c)));
        }
    }
    return out;
}

ShapGlobal shap_global(const cml::Classifier& model, const Matrix& X, const Matrix& background,
                       int workers) {
    if (X.rows() == 0) throw std::invalid_argument("shap_global: empty sample set");
    ShapGlobal out;
    out.per_sample.resize(X.rows());
    parallel_for(X.rows(), workers, [&](std::size_t i) {
        out.per_sample[i] = shap_exact(model, X.row(i), background);
    });

    const std::size_t p = X.cols();
    const std::size_t num_classes = static_cast<std::size_t>(model.num_classes());
    out.mean_abs_phi = Matrix(num_classes, p);
    out.pooled.assign(p, 0.0);
    for (const ShapExplanation& expl : out.per_sample)
        for (std::size_t c = 0; c < num_classes; ++c)
            for (std::size_t j = 0; j < p; ++j)
                out.mean_abs_phi.at(c, j) += std::abs(expl.phi.at(c, j));
    for (std::size_t c = 0; c < num_classes; ++c)
        for (std::size_t j = 0; j < p; ++j) {
            out.mean_abs_phi.at(c, j) /= static_cast<double>(X.rows());
            out.pooled[j] += out.mean_abs_phi.at(c, j);
        }
    for (double& v : out.pooled) v /= static_cast<double>(num_classes);
    return out;
}

}  // namespace qmlx::explain
