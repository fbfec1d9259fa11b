#include "qmlx/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "qmlx/rng.hpp"

namespace qmlx::cml {

namespace {

struct SplitCandidate {
    bool found = false;
    int feature = -1;
    double threshold = 0.0;
    double impurity = 0.0;  // weighted child Gini
};

double gini_from_counts(std::span<const double> counts, double total) {
    if (total <= 0.0) return 0.0;
    double sum_sq = 0.0;
    for (double c : counts) sum_sq += c * c;
    return 1.0 - sum_sq / (total * total);
}

class TreeBuilder {
public:
    TreeBuilder(const Matrix& X, std::span<const int> y, int num_classes,
                const TreeConfig& config)
        : X_(X), y_(y), num_classes_(num_classes), config_(config), rng_(config.seed) {}

    std::vector<TreeNode> build(std::vector<int> sample_indices) {
        nodes_.clear();
        grow(std::move(sample_indices), 0);
        return std::move(nodes_);
    }

private:
    // Returns the node index.
    int grow(std::vector<int> samples, int depth) {
        const int node_index = static_cast<int>(nodes_.size());
        nodes_.emplace_back();
        std::vector<double> counts(static_cast<std::size_t>(num_classes_), 0.0);
        for (int i : samples) counts[static_cast<std::size_t>(y_[static_cast<std::size_t>(i)])] += 1.0;
        nodes_[static_cast<std::size_t>(node_index)].counts = counts;

        const double total = static_cast<double>(samples.size());
        const bool pure = gini_from_counts(counts, total) <= 0.0;
        const bool depth_capped = config_.max_depth > 0 && depth >= config_.max_depth;
        if (pure || depth_capped || static_cast<int>(samples.size()) < 2 * config_.min_leaf) {
            return node_index;
        }

        const SplitCandidate split = best_split(samples, counts, total);
        if (!split.found) return node_index;

        std::vector<int> left, right;
        for (int i : samples) {
            if (X_.at(static_cast<std::size_t>(i), static_cast<std::size_t>(split.feature)) <=
                split.threshold)
                left.push_back(i);
            else
                right.push_back(i);
        }
        samples.clear();
        samples.shrink_to_fit();

        const int left_index = grow(std::move(left), depth + 1);
        const int right_index = grow(std::move(right), depth + 1);
        nodes_[static_cast<std::size_t>(node_index)].feature = split.feature;
        nodes_[static_cast<std::size_t>(node_index)].threshold = split.threshold;
        nodes_[static_cast<std::size_t>(node_index)].left = left_index;
        nodes_[static_cast<std::size_t>(node_index)].right = right_index;
        return node_index;
    }

    SplitCandidate best_split(const std::vector<int>& samples, const std::vector<double>& counts,
                              double total) {
        const double parent_gini = gini_from_counts(counts, total);
        SplitCandidate best;
        best.impurity = parent_gini;

        std::vector<int> features = candidate_features();
        std::vector<std::pair<double, int>> values(samples.size());
        std::vector<double> left_counts(static_cast<std::size_t>(num_classes_));

        for (int feature : features) {
            for (std::size_t k = 0; k < samples.size(); ++k) {
                const int i = samples[k];
                values[k] = {X_.at(static_cast<std::size_t>(i), static_cast<std::size_t>(feature)),
                             y_[static_cast<std::size_t>(i)]};
            }
            std::sort(values.begin(), values.end());

            std::fill(left_counts.begin(), left_counts.end(), 0.0);
            double left_total = 0.0;
            for (std::size_t k = 0; k + 1 < values.size(); ++k) {
                left_counts[static_cast<std::size_t>(values[k].second)] += 1.0;
                left_total += 1.0;
                if (values[k].first == values[k + 1].first) continue;  // no boundary here
                const double right_total = total - left_total;
                if (left_total < config_.min_leaf || right_total < config_.min_leaf) continue;

                double left_sq = 0.0, right_sq = 0.0;
                for (int c = 0; c < num_classes_; ++c) {
                    const double lc = left_counts[static_cast<std::size_t>(c)];
                    const double rc = counts[static_cast<std::size_t>(c)] - lc;
                    left_sq += lc * lc;
                    right_sq += rc * rc;
                }
                const double weighted =
                    (left_total - left_sq / left_total + right_total - right_sq / right_total) /
                    total;
                // Strict improvement keeps the first (lowest feature, lowest
                // threshold) of equal-quality splits.
                if (weighted < best.impurity - 1e-12) {
                    best.found = true;
                    best.feature = feature;
                    best.threshold = (values[k].first + values[k + 1].first) / 2.0;
                    best.impurity = weighted;
                }
            }
        }
        return best;
    }

    std::vector<int> candidate_features() {
        const int p = static_cast<int>(X_.cols());
        std::vector<int> all(static_cast<std::size_t>(p));
        std::iota(all.begin(), all.end(), 0);
        const int m = config_.feature_subsample;
        if (m <= 0 || m >= p) return all;
        // Partial Fisher-Yates, then sorted so candidates are visited in
        // ascending feature order.
        for (int k = 0; k < m; ++k) {
            const std::size_t j =
                static_cast<std::size_t>(k) +
                static_cast<std::size_t>(rng_.below(static_cast<std::uint64_t>(p - k)));
            std::swap(all[static_cast<std::size_t>(k)], all[j]);
        }
        all.resize(static_cast<std::size_t>(m));
        std::sort(all.begin(), all.end());
        return all;
    }

    const Matrix& X_;
    std::span<const int> y_;
    int num_classes_;
    TreeConfig config_;
    Rng rng_;
    std::vector<TreeNode> nodes_;
};

}  // namespace

DecisionTree DecisionTree::fit(const Matrix& X, std::span<const int> y, int num_classes,
                               const TreeConfig& config) {
    if (X.rows() == 0 || X.rows() != y.size())
        throw std::invalid_argument("DecisionTree::fit: empty or mismatched data");
    if (num_classes < 1) throw std::invalid_argument("DecisionTree::fit: bad class count");
    std::vector<int> indices(X.rows());
    std::iota(indices.begin(), indices.end(), 0);
    TreeBuilder builder(X, y, num_classes, config);
    return DecisionTree(num_classes, builder.build(std::move(indices)));
}

std::vector<double> DecisionTree::predict_proba(std::span<const double> x) const {
    const TreeNode* node = &nodes_[0];
    while (node->feature >= 0) {
        node = x[static_cast<std::size_t>(node->feature)] <= node->threshold
                   ? &nodes_[static_cast<std::size_t>(node->left)]
                   : &nodes_[static_cast<std::size_t>(node->right)];
    }
    double total = 0.0;
    for (double c : node->counts) total += c;
    std::vector<double> p(node->counts.size(), 0.0);
    if (total > 0.0)
        for (std::size_t c = 0; c < p.size(); ++c) p[c] = node->counts[c] / total;
    return p;
}

ForestModel ForestModel::fit(const Matrix& X, std::span<const int> y, int num_classes,
                             const ForestConfig& config, int workers) {
    if (config.num_trees < 1) throw std::invalid_argument("ForestModel::fit: need B >= 1");
    if (X.rows() == 0 || X.rows() != y.size())
        throw std::invalid_argument("ForestModel::fit: empty or mismatched data");

    int subsample = config.feature_subsample;
    if (subsample <= 0)
        subsample = std::max(1, static_cast<int>(std::lround(std::sqrt(
                                    static_cast<double>(X.cols())))));

    std::vector<DecisionTree> trees(static_cast<std::size_t>(config.num_trees));
    parallel_for(static_cast<std::size_t>(config.num_trees), workers, [&](std::size_t t) {
        TreeConfig tree_config;
        tree_config.max_depth = config.max_depth;
        tree_config.min_leaf = config.min_leaf;
        tree_config.feature_subsample = subsample;
        tree_config.seed = config.seed + t;

        if (config.bootstrap) {
            // Separate stream from the split-feature sampling inside fit.
            Rng rng(derive_seed(tree_config.seed, 1));
            const std::size_t n = X.rows();
            std::vector<int> draw(n);
            for (std::size_t i = 0; i < n; ++i)
                draw[i] = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
            Matrix Xb = X.select_rows(draw);
            std::vector<int> yb(n);
            for (std::size_t i = 0; i < n; ++i) yb[i] = y[static_cast<std::size_t>(draw[i])];
            trees[t] = DecisionTree::fit(Xb, yb, num_classes, tree_config);
        } else {
            trees[t] = DecisionTree::fit(X, y, num_classes, tree_config);
        }
    });
    return ForestModel(num_classes, std::move(trees), config);
}

std::vector<double> ForestModel::predict_proba(std::span<const double> x) const {
    std::vector<double> acc(static_cast<std::size_t>(num_classes_), 0.0);
    for (const DecisionTree& tree : trees_) {
        const std::vector<double> p = tree.predict_proba(x);
        for (std::size_t c = 0; c < acc.size(); ++c) acc[c] += p[c];
    }
    const double inv = 1.0 / static_cast<double>(trees_.size());
    for (double& v : acc) v *= inv;
    return acc;
}

}  // namespace qmlx::cml
