#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qmlx/classifier.hpp"

namespace qmlx::cml {

struct TreeConfig {
    int max_depth = 0;         // 0 = unlimited
    int min_leaf = 1;          // minimum samples per leaf
    int feature_subsample = 0; // features considered per split; 0 = all
    std::uint64_t seed = 0;
};

/// Flat node pool; node 0 is the root. Leaves have feature == -1 and keep
/// the class counts of their training samples.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    std::vector<double> counts;
};

/// Greedy CART with Gini impurity. Splits send x <= threshold left. Ties on
/// impurity go to the lowest feature index, then the lowest threshold.
class DecisionTree {
public:
    static DecisionTree fit(const Matrix& X, std::span<const int> y, int num_classes,
                            const TreeConfig& config);

    std::vector<double> predict_proba(std::span<const double> x) const;
    int num_classes() const { return num_classes_; }
    const std::vector<TreeNode>& nodes() const { return nodes_; }
    std::vector<TreeNode>& nodes() { return nodes_; }

    DecisionTree() = default;
    DecisionTree(int num_classes, std::vector<TreeNode> nodes)
        : num_classes_(num_classes), nodes_(std::move(nodes)) {}

private:
    int num_classes_ = 0;
    std::vector<TreeNode> nodes_;
};

struct ForestConfig {
    int num_trees = 100;
    bool bootstrap = true;
    int max_depth = 0;
    int min_leaf = 1;
    int feature_subsample = 0;  // 0 = round(sqrt(p))
    std::uint64_t seed = 0;
};

/// Bootstrap-aggregated CART trees; the ensemble probability is the
/// arithmetic mean of the tree probabilities. Tree t draws its bootstrap
/// sample and split features from seed + t.
class ForestModel final : public Classifier {
public:
    static ForestModel fit(const Matrix& X, std::span<const int> y, int num_classes,
                           const ForestConfig& config, int workers = 1);

    std::string kind() const override { return "rf"; }
    int num_classes() const override { return num_classes_; }
    std::vector<double> predict_proba(std::span<const double> x) const override;

    const std::vector<DecisionTree>& trees() const { return trees_; }
    const ForestConfig& config() const { return config_; }

    ForestModel(int num_classes, std::vector<DecisionTree> trees, ForestConfig config)
        : num_classes_(num_classes), trees_(std::move(trees)), config_(config) {}

private:
    int num_classes_ = 0;
    std::vector<DecisionTree> trees_;
    ForestConfig config_;
};

}  // namespace qmlx::cml
