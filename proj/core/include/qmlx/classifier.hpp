#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "qmlx/common.hpp"

namespace qmlx::cml {

/// Uniform trained-model contract shared by SVC, QSVC, RF and VQC. Trained
/// models are immutable and safe to share across threads. predict is always
/// the argmax of predict_proba, so the two can never disagree.
class Classifier {
public:
    virtual ~Classifier() = default;

    virtual std::string kind() const = 0;
    virtual int num_classes() const = 0;

    /// Probability vector over classes: nonnegative, sums to 1 within 1e-9.
    virtual std::vector<double> predict_proba(std::span<const double> x) const = 0;

    /// argmax of predict_proba; lowest class index wins exact ties.
    virtual int predict(std::span<const double> x) const;

    std::vector<int> predict_batch(const Matrix& X) const;
    Matrix predict_proba_batch(const Matrix& X) const;

    /// Fraction of rows whose prediction matches y.
    double accuracy(const Matrix& X, std::span<const int> y) const;
};

using ClassifierPtr = std::unique_ptr<Classifier>;

}  // namespace qmlx::cml
