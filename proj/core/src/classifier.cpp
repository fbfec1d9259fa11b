#include "qmlx/classifier.hpp"

namespace qmlx::cml {

int Classifier::predict(std::span<const double> x) const {
    const std::vector<double> p = predict_proba(x);
    int best = 0;
    for (int c = 1; c < static_cast<int>(p.size()); ++c)
        if (p[static_cast<std::size_t>(c)] > p[static_cast<std::size_t>(best)]) best = c;
    return best;
}

std::vector<int> Classifier::predict_batch(const Matrix& X) const {
    std::vector<int> out(X.rows());
    for (std::size_t i = 0; i < X.rows(); ++i) out[i] = predict(X.row(i));
    return out;
}

Matrix Classifier::predict_proba_batch(const Matrix& X) const {
    Matrix out(X.rows(), static_cast<std::size_t>(num_classes()));
    for (std::size_t i = 0; i < X.rows(); ++i) {
        const std::vector<double> p = predict_proba(X.row(i));
        for (std::size_t c = 0; c < p.size(); ++c) out.at(i, c) = p[c];
    }
    return out;
}

double Classifier::accuracy(const Matrix& X, std::span<const int> y) const {
    if (X.rows() == 0) return 0.0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < X.rows(); ++i)
        if (predict(X.row(i)) == y[i]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(X.rows());
}

}  // namespace qmlx::cml
