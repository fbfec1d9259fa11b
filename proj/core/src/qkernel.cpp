#include "qmlx/qkernel.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace qmlx::qkernel {

using encode::FeatureMapSpec;
using qsim::StateVector;

double fidelity(const FeatureMapSpec& spec, std::span<const double> x_i,
                std::span<const double> x_j) {
    const auto u_i = encode::zz_feature_map(spec, x_i);
    const auto u_j = encode::zz_feature_map(spec, x_j);
    StateVector state = apply_circuit(StateVector::zero(spec.num_features), u_i);
    state = apply_circuit(state, qsim::inverse_circuit(u_j));
    return std::norm(state.amplitude(0));
}

double state_fidelity(const StateVector& a, const StateVector& b) {
    return std::norm(qsim::inner_product(a, b));
}

KernelMatrix kernel_matrix(const FeatureMapSpec& spec, const Matrix& samples, int workers) {
    spec.validate();
    if (samples.rows() == 0) throw std::invalid_argument("kernel_matrix: empty sample set");
    if (samples.cols() != static_cast<std::size_t>(spec.num_features))
        throw std::invalid_argument("kernel_matrix: sample arity does not match feature map");

    const std::size_t n = samples.rows();
    KernelMatrix k(n, n);
    k.symmetric = true;

    // Strict upper triangle, flattened so parallel chunks stay balanced.
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);

    parallel_for(pairs.size(), workers, [&](std::size_t p) {
        const auto [i, j] = pairs[p];
        const double f = fidelity(spec, samples.row(i), samples.row(j));
        k.at(i, j) = f;
        k.at(j, i) = f;
    });
    for (std::size_t i = 0; i < n; ++i) k.at(i, i) = 1.0;
    return k;
}

KernelMatrix kernel_matrix(const FeatureMapSpec& spec, const Matrix& a, const Matrix& b,
                           int workers) {
    spec.validate();
    if (a.rows() == 0 || b.rows() == 0)
        throw std::invalid_argument("kernel_matrix: empty sample set");
    if (a.cols() != static_cast<std::size_t>(spec.num_features) || b.cols() != a.cols())
        throw std::invalid_argument("kernel_matrix: sample arity does not match feature map");

    KernelMatrix k(a.rows(), b.rows());
    parallel_for(a.rows() * b.rows(), workers, [&](std::size_t idx) {
        const std::size_t i = idx / b.rows();
        const std::size_t j = idx % b.rows();
        k.at(i, j) = fidelity(spec, a.row(i), b.row(j));
    });
    return k;
}

void write_csv(const KernelMatrix& k, std::ostream& out) {
    out.precision(17);
    for (std::size_t i = 0; i < k.rows; ++i) {
        for (std::size_t j = 0; j < k.cols; ++j) {
            if (j) out << ',';
            out << k.at(i, j);
        }
        out << '\n';
    }
}

}  // namespace qmlx::qkernel
