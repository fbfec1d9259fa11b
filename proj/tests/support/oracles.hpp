// Independent reference implementations used only by the test suites. These
// deliberately avoid the library's code paths: circuits are evaluated through
// dense matrix products, the SVM dual through projected gradient ascent, and
// eigenvalues through Jacobi sweeps.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "qmlx/classifier.hpp"
#include "qmlx/qkernel.hpp"
#include "qmlx/qsim.hpp"

namespace oracles {

using Complex = std::complex<double>;

// --- dense circuit oracle ---------------------------------------------------

// Full 2^n x 2^n matrix of one gate, built entry-wise from the mathematical
// definition (little-endian qubit order).
inline std::vector<Complex> gate_matrix_dense(const qmlx::qsim::Gate& gate, int num_qubits) {
    const std::size_t dim = std::size_t{1} << num_qubits;
    std::vector<Complex> M(dim * dim, Complex{0.0, 0.0});
    const std::size_t t = std::size_t{1} << gate.target;

    Complex u00, u01, u10, u11;
    const double half = gate.angle / 2.0;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    switch (gate.kind) {
        case qmlx::qsim::GateKind::H:
            u00 = inv_sqrt2; u01 = inv_sqrt2; u10 = inv_sqrt2; u11 = -inv_sqrt2;
            break;
        case qmlx::qsim::GateKind::RY:
            u00 = std::cos(half); u01 = -std::sin(half);
            u10 = std::sin(half); u11 = std::cos(half);
            break;
        case qmlx::qsim::GateKind::RZ:
            u00 = std::exp(Complex{0.0, -half}); u01 = 0.0;
            u10 = 0.0; u11 = std::exp(Complex{0.0, half});
            break;
        case qmlx::qsim::GateKind::Phase:
            u00 = 1.0; u01 = 0.0; u10 = 0.0; u11 = std::exp(Complex{0.0, gate.angle});
            break;
        case qmlx::qsim::GateKind::CX: {
            const std::size_t c = std::size_t{1} << gate.control;
            for (std::size_t col = 0; col < dim; ++col) {
                const std::size_t row = (col & c) ? (col ^ t) : col;
                M[row * dim + col] = 1.0;
            }
            return M;
        }
    }
    for (std::size_t col = 0; col < dim; ++col) {
        if (col & t) {
            M[(col ^ t) * dim + col] = u01;
            M[col * dim + col] = u11;
        } else {
            M[col * dim + col] = u00;
            M[(col | t) * dim + col] = u10;
        }
    }
    return M;
}

inline std::vector<Complex> matmul(const std::vector<Complex>& A, const std::vector<Complex>& B,
                                   std::size_t dim) {
    std::vector<Complex> C(dim * dim, Complex{0.0, 0.0});
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t k = 0; k < dim; ++k) {
            const Complex a = A[i * dim + k];
            if (a == Complex{0.0, 0.0}) continue;
            for (std::size_t j = 0; j < dim; ++j) C[i * dim + j] += a * B[k * dim + j];
        }
    return C;
}

// Unitary of a bound circuit as an explicit matrix product.
inline std::vector<Complex> circuit_unitary_dense(const qmlx::qsim::ParameterizedCircuit& circuit) {
    const std::size_t dim = std::size_t{1} << circuit.num_qubits();
    std::vector<Complex> U(dim * dim, Complex{0.0, 0.0});
    for (std::size_t i = 0; i < dim; ++i) U[i * dim + i] = 1.0;
    for (const auto& cg : circuit.gates())
        U = matmul(gate_matrix_dense(cg.gate, circuit.num_qubits()), U, dim);
    return U;
}

inline std::vector<Complex> apply_dense(const std::vector<Complex>& U,
                                        const std::vector<Complex>& v) {
    const std::size_t dim = v.size();
    std::vector<Complex> out(dim, Complex{0.0, 0.0});
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) out[i] += U[i * dim + j] * v[j];
    return out;
}

// --- SVM dual oracle ---------------------------------------------------------

// Projected gradient ascent on the soft-margin dual. Projection onto
// {0 <= a <= C, y.a = 0} by bisection on the hyperplane multiplier.
inline std::vector<double> project_dual(std::vector<double> a, std::span<const int> y, double C) {
    const auto shifted = [&](double lambda, std::vector<double>& out) {
        double dot = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            out[i] = std::clamp(a[i] - lambda * static_cast<double>(y[i]), 0.0, C);
            dot += out[i] * static_cast<double>(y[i]);
        }
        return dot;
    };
    std::vector<double> out(a.size());
    double lo = -1e6, hi = 1e6;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = (lo + hi) / 2.0;
        if (shifted(mid, out) > 0.0) lo = mid;
        else hi = mid;
    }
    shifted((lo + hi) / 2.0, out);
    return out;
}

struct QpSolution {
    std::vector<double> alpha;
    double objective = 0.0;
};

inline double dual_objective(const qmlx::qkernel::KernelMatrix& K, std::span<const int> y,
                             std::span<const double> a) {
    double linear = 0.0, quad = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        linear += a[i];
        for (std::size_t j = 0; j < a.size(); ++j)
            quad += a[i] * a[j] * static_cast<double>(y[i]) * static_cast<double>(y[j]) *
                    K.at(i, j);
    }
    return linear - 0.5 * quad;
}

inline QpSolution solve_dual_projected_gradient(const qmlx::qkernel::KernelMatrix& K,
                                                std::span<const int> y, double C,
                                                int iterations = 200000) {
    const std::size_t n = K.rows;
    // Gershgorin bound on the largest eigenvalue of Q.
    double L = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) row += std::abs(K.at(i, j));
        L = std::max(L, row);
    }
    const double step = 1.0 / std::max(L, 1e-12);

    std::vector<double> a(n, 0.0), grad(n);
    for (int it = 0; it < iterations; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            double qa = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                qa += static_cast<double>(y[i]) * static_cast<double>(y[j]) * K.at(i, j) * a[j];
            grad[i] = 1.0 - qa;
        }
        for (std::size_t i = 0; i < n; ++i) a[i] += step * grad[i];
        a = project_dual(std::move(a), y, C);
    }
    return {a, dual_objective(K, y, a)};
}

// --- symmetric eigenvalues ----------------------------------------------------

// Cyclic Jacobi; returns eigenvalues of a symmetric matrix (row-major).
inline std::vector<double> jacobi_eigenvalues(std::vector<double> A, std::size_t n,
                                              int max_sweeps = 50) {
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += A[p * n + q] * A[p * n + q];
        if (off < 1e-22) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = A[p * n + q];
                if (std::abs(apq) < 1e-18) continue;
                const double app = A[p * n + p], aqq = A[q * n + q];
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = A[k * n + p], akq = A[k * n + q];
                    A[k * n + p] = c * akp - s * akq;
                    A[k * n + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = A[p * n + k], aqk = A[q * n + k];
                    A[p * n + k] = c * apk - s * aqk;
                    A[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = A[i * n + i];
    std::sort(eig.begin(), eig.end());
    return eig;
}

// --- synthetic models ----------------------------------------------------------

// Wraps an arbitrary probability function as a Classifier for explainer tests.
class LambdaClassifier final : public qmlx::cml::Classifier {
public:
    using Fn = std::function<std::vector<double>(std::span<const double>)>;
    LambdaClassifier(int num_classes, Fn fn) : num_classes_(num_classes), fn_(std::move(fn)) {}

    std::string kind() const override { return "synthetic"; }
    int num_classes() const override { return num_classes_; }
    std::vector<double> predict_proba(std::span<const double> x) const override { return fn_(x); }

private:
    int num_classes_;
    Fn fn_;
};

}  // namespace oracles
