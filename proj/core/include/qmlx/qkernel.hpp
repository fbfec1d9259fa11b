#pragma once

#include <iosfwd>
#include <vector>

#include "qmlx/common.hpp"
#include "qmlx/encode.hpp"

namespace qmlx::qkernel {

/// Real Gram matrix of fidelity kernel entries in [0, 1]. When built over a
/// single sample set it is symmetric with unit diagonal.
struct KernelMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> entries;  // row-major
    bool symmetric = false;

    KernelMatrix() = default;
    KernelMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), entries(r * c, 0.0) {}

    double at(std::size_t r, std::size_t c) const { return entries[r * cols + c]; }
    double& at(std::size_t r, std::size_t c) { return entries[r * cols + c]; }
};

/// Fidelity |<phi(x_i)|phi(x_j)>|^2 via the compute-uncompute method: U(x_i)
/// on |0...0>, then the inverse of U(x_j), then the probability of the
/// all-zeros outcome.
double fidelity(const encode::FeatureMapSpec& spec, std::span<const double> x_i,
                std::span<const double> x_j);

/// Same quantity from the states directly. Kept as an independent route; the
/// two agree within 1e-10 and the test suite holds them to that.
double state_fidelity(const qsim::StateVector& a, const qsim::StateVector& b);

/// Symmetric Gram over one sample set: upper triangle computed by
/// compute-uncompute and mirrored, unit diagonal.
KernelMatrix kernel_matrix(const encode::FeatureMapSpec& spec, const Matrix& samples,
                           int workers = 1);

/// Rectangular kernel block between two sample sets.
KernelMatrix kernel_matrix(const encode::FeatureMapSpec& spec, const Matrix& a, const Matrix& b,
                           int workers = 1);

/// Row-major, header-free CSV.
void write_csv(const KernelMatrix& k, std::ostream& out);

}  // namespace qmlx::qkernel
