#include "qmlx/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qmlx::cml {

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma) {
    if (a.size() != b.size()) throw std::invalid_argument("rbf_kernel: dimension mismatch");
    double d2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        d2 += d * d;
    }
    return std::exp(-gamma * d2);
}

double rbf_gamma_scale(const Matrix& X) {
    if (X.rows() == 0 || X.cols() == 0) throw std::invalid_argument("rbf_gamma_scale: empty data");
    const auto& v = X.data();
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    var /= static_cast<double>(v.size());
    if (var <= 0.0) throw std::invalid_argument("rbf_gamma_scale: zero-variance data");
    return 1.0 / (static_cast<double>(X.cols()) * var);
}

SvmBinaryModel svm_train_binary(const qkernel::KernelMatrix& K, std::span<const int> y,
                                const SmoConfig& config) {
    const std::size_t n = K.rows;
    if (K.rows != K.cols) throw std::invalid_argument("svm_train_binary: Gram must be square");
    if (y.size() != n) throw std::invalid_argument("svm_train_binary: label count mismatch");
    bool has_pos = false, has_neg = false;
    for (int label : y) {
        if (label == 1) has_pos = true;
        else if (label == -1) has_neg = true;
        else throw std::invalid_argument("svm_train_binary: labels must be -1 or +1");
    }
    if (!has_pos || !has_neg)
        throw std::invalid_argument("svm_train_binary: need both classes present");
    const double C = config.C;
    if (C <= 0.0) throw std::invalid_argument("svm_train_binary: C must be positive");

    std::vector<double> alpha(n, 0.0);
    // f_i = sum_j alpha_j y_j K_ij (bias excluded). Starts at zero.
    std::vector<double> f(n, 0.0);

    // Maximal violating pair over the gradient y_i - f_i: i from the "up"
    // set, j from the "down" set, stop when the gap drops below tolerance.
    const auto in_up = [&](std::size_t i) {
        return (y[i] == 1 && alpha[i] < C) || (y[i] == -1 && alpha[i] > 0.0);
    };
    const auto in_low = [&](std::size_t i) {
        return (y[i] == 1 && alpha[i] > 0.0) || (y[i] == -1 && alpha[i] < C);
    };

    int iter = 0;
    double gap = std::numeric_limits<double>::infinity();
    for (; iter < config.max_iterations; ++iter) {
        double up_max = -std::numeric_limits<double>::infinity();
        double low_min = std::numeric_limits<double>::infinity();
        std::size_t i_up = n, i_low = n;
        for (std::size_t i = 0; i < n; ++i) {
            const double g = static_cast<double>(y[i]) - f[i];
            if (in_up(i) && g > up_max) {
                up_max = g;
                i_up = i;
            }
            if (in_low(i) && g < low_min) {
                low_min = g;
                i_low = i;
            }
        }
        gap = up_max - low_min;
        if (i_up == n || i_low == n || gap < config.tolerance) break;

        const std::size_t i = i_up, j = i_low;
        const double ai_old = alpha[i], aj_old = alpha[j];
        const int yi = y[i], yj = y[j];

        double eta = K.at(i, i) + K.at(j, j) - 2.0 * K.at(i, j);
        if (eta <= 1e-12) eta = 1e-12;

        // Move alpha_i by yi*t and alpha_j by -yj*t, which keeps y . alpha
        // fixed; the unconstrained optimum t is clipped to the box.
        double t = (up_max - low_min) / eta;
        if (yi == 1) t = std::min(t, C - ai_old);
        else t = std::min(t, ai_old);
        if (yj == 1) t = std::min(t, aj_old);
        else t = std::min(t, C - aj_old);
        if (t <= 0.0) break;  // numerically stuck at the box; gap is stale

        const auto snap = [C](double a) {
            if (a < 1e-12) return 0.0;
            if (a > C - 1e-12) return C;
            return a;
        };
        const double ai = snap(ai_old + static_cast<double>(yi) * t);
        const double aj = snap(aj_old - static_cast<double>(yj) * t);
        alpha[i] = ai;
        alpha[j] = aj;

        const double di = (ai - ai_old) * static_cast<double>(yi);
        const double dj = (aj - aj_old) * static_cast<double>(yj);
        for (std::size_t k = 0; k < n; ++k) f[k] += di * K.at(i, k) + dj * K.at(j, k);
    }

    // Bias from the free support vectors; midpoint of the KKT bounds when
    // every alpha sits on the box boundary.
    double bias;
    {
        double sum = 0.0;
        std::size_t free_count = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (alpha[i] > 1e-8 && alpha[i] < C - 1e-8) {
                sum += static_cast<double>(y[i]) - f[i];
                ++free_count;
            }
        }
        if (free_count > 0) {
            bias = sum / static_cast<double>(free_count);
        } else {
            double up_max = -std::numeric_limits<double>::infinity();
            double low_min = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < n; ++i) {
                const double g = static_cast<double>(y[i]) - f[i];
                if (in_up(i)) up_max = std::max(up_max, g);
                if (in_low(i)) low_min = std::min(low_min, g);
            }
            bias = (up_max + low_min) / 2.0;
        }
    }

    SvmBinaryModel model;
    model.C = C;
    model.bias = bias;
    model.iterations = iter;
    model.kkt_violation = gap;
    for (std::size_t i = 0; i < n; ++i) {
        if (alpha[i] > 1e-12) {
            model.support_indices.push_back(static_cast<int>(i));
            model.alphas.push_back(alpha[i]);
            model.support_labels.push_back(y[i]);
        }
    }
    return model;
}

double svm_decision(const SvmBinaryModel& model, std::span<const double> k_row) {
    if (k_row.size() != model.support_indices.size())
        throw std::invalid_argument("svm_decision: kernel row not aligned with support set");
    double f = model.bias;
    for (std::size_t i = 0; i < k_row.size(); ++i)
        f += model.alphas[i] * static_cast<double>(model.support_labels[i]) * k_row[i];
    return f;
}

double svm_dual_objective(const SvmBinaryModel& model, const qkernel::KernelMatrix& K) {
    double linear = 0.0, quad = 0.0;
    for (std::size_t a = 0; a < model.alphas.size(); ++a) {
        linear += model.alphas[a];
        for (std::size_t b = 0; b < model.alphas.size(); ++b) {
            const std::size_t i = static_cast<std::size_t>(model.support_indices[a]);
            const std::size_t j = static_cast<std::size_t>(model.support_indices[b]);
            quad += model.alphas[a] * model.alphas[b] *
                    static_cast<double>(model.support_labels[a]) *
                    static_cast<double>(model.support_labels[b]) * K.at(i, j);
        }
    }
    return linear - 0.5 * quad;
}

OvoSvm ovo_train(const qkernel::KernelMatrix& K, std::span<const int> y, int num_classes,
                 const SmoConfig& config) {
    if (num_classes < 2) throw std::invalid_argument("ovo_train: need at least two classes");
    std::vector<std::size_t> class_counts(static_cast<std::size_t>(num_classes), 0);
    for (int label : y) {
        if (label < 0 || label >= num_classes)
            throw std::invalid_argument("ovo_train: label out of range");
        ++class_counts[static_cast<std::size_t>(label)];
    }
    for (int c = 0; c < num_classes; ++c)
        if (class_counts[static_cast<std::size_t>(c)] < 2)
            throw std::invalid_argument("ovo_train: class " + std::to_string(c) +
                                        " has fewer than 2 samples");

    OvoSvm ovo;
    ovo.num_classes = num_classes;
    for (int a = 0; a < num_classes; ++a) {
        for (int b = a + 1; b < num_classes; ++b) {
            std::vector<int> rows;
            std::vector<int> labels;
            for (std::size_t i = 0; i < y.size(); ++i) {
                if (y[i] == a || y[i] == b) {
                    rows.push_back(static_cast<int>(i));
                    labels.push_back(y[i] == a ? 1 : -1);
                }
            }
            qkernel::KernelMatrix sub(rows.size(), rows.size());
            sub.symmetric = true;
            for (std::size_t r = 0; r < rows.size(); ++r)
                for (std::size_t c = 0; c < rows.size(); ++c)
                    sub.at(r, c) = K.at(static_cast<std::size_t>(rows[r]),
                                        static_cast<std::size_t>(rows[c]));

            SvmBinaryModel model = svm_train_binary(sub, labels, config);
            // Remap support indices from the pair's subset back to the full
            // training set.
            for (int& idx : model.support_indices) idx = rows[static_cast<std::size_t>(idx)];
            ovo.pairs.push_back({a, b, std::move(model)});
        }
    }
    return ovo;
}

std::vector<double> ovo_scores(const OvoSvm& ovo, std::span<const double> k_row_full) {
    std::vector<double> votes(static_cast<std::size_t>(ovo.num_classes), 0.0);
    std::vector<double> margins(static_cast<std::size_t>(ovo.num_classes), 0.0);
    std::vector<double> k_row;
    for (const OvoSvm::Pair& pair : ovo.pairs) {
        k_row.clear();
        for (int idx : pair.model.support_indices)
            k_row.push_back(k_row_full[static_cast<std::size_t>(idx)]);
        const double f = svm_decision(pair.model, k_row);
        if (f > 0.0) votes[static_cast<std::size_t>(pair.class_a)] += 1.0;
        else votes[static_cast<std::size_t>(pair.class_b)] += 1.0;
        margins[static_cast<std::size_t>(pair.class_a)] += f;
        margins[static_cast<std::size_t>(pair.class_b)] -= f;
    }
    // Vote count dominates; the logistic term is a (0,1) tie-break on summed
    // decision values, so argmax(scores) is exactly the OVO vote rule.
    std::vector<double> scores(votes.size());
    for (std::size_t c = 0; c < votes.size(); ++c)
        scores[c] = votes[c] + 1.0 / (1.0 + std::exp(-margins[c]));
    return scores;
}

std::vector<double> softmax(std::span<const double> scores) {
    double max = -std::numeric_limits<double>::infinity();
    for (double s : scores) max = std::max(max, s);
    std::vector<double> p(scores.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        p[i] = std::exp(scores[i] - max);
        sum += p[i];
    }
    for (double& v : p) v /= sum;
    return p;
}

SvcModel SvcModel::train(const Matrix& X, std::span<const int> y, int num_classes,
                         const SvcConfig& config) {
    if (X.rows() == 0) throw std::invalid_argument("SvcModel::train: empty data");
    const double gamma = config.gamma > 0.0 ? config.gamma : rbf_gamma_scale(X);

    qkernel::KernelMatrix K(X.rows(), X.rows());
    K.symmetric = true;
    for (std::size_t i = 0; i < X.rows(); ++i)
        for (std::size_t j = i; j < X.rows(); ++j) {
            const double v = rbf_kernel(X.row(i), X.row(j), gamma);
            K.at(i, j) = v;
            K.at(j, i) = v;
        }

    SmoConfig smo;
    smo.C = config.C;
    OvoSvm ovo = ovo_train(K, y, num_classes, smo);
    return SvcModel(X, std::move(ovo), gamma, config);
}

std::vector<double> SvcModel::predict_proba(std::span<const double> x) const {
    if (x.size() != train_X_.cols())
        throw std::invalid_argument("SvcModel::predict_proba: feature arity mismatch");
    std::vector<double> k_row(train_X_.rows());
    for (std::size_t i = 0; i < train_X_.rows(); ++i)
        k_row[i] = rbf_kernel(x, train_X_.row(i), gamma_);
    return softmax(ovo_scores(ovo_, k_row));
}

QsvcModel::QsvcModel(Matrix train_X, OvoSvm ovo, QsvcConfig config)
    : train_X_(std::move(train_X)), ovo_(std::move(ovo)), config_(config) {
    train_states_.reserve(train_X_.rows());
    for (std::size_t i = 0; i < train_X_.rows(); ++i)
        train_states_.push_back(encode::zz_feature_state(config_.feature_map, train_X_.row(i)));
}

QsvcModel QsvcModel::train(const Matrix& X, std::span<const int> y, int num_classes,
                           const QsvcConfig& config, int workers) {
    const qkernel::KernelMatrix K = qkernel::kernel_matrix(config.feature_map, X, workers);
    SmoConfig smo;
    smo.C = config.C;
    OvoSvm ovo = ovo_train(K, y, num_classes, smo);
    return QsvcModel(X, std::move(ovo), config);
}

std::vector<double> QsvcModel::predict_proba(std::span<const double> x) const {
    if (x.size() != train_X_.cols())
        throw std::invalid_argument("QsvcModel::predict_proba: feature arity mismatch");
    const qsim::StateVector phi = encode::zz_feature_state(config_.feature_map, x);
    std::vector<double> k_row(train_states_.size());
    for (std::size_t i = 0; i < train_states_.size(); ++i)
        k_row[i] = qkernel::state_fidelity(phi, train_states_[i]);
    return softmax(ovo_scores(ovo_, k_row));
}

}  // namespace qmlx::cml
