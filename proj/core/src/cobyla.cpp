#include "qmlx/cobyla.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qmlx::vqc {

namespace {

constexpr double kFarFactor = 2.1;    // vertex distance that triggers a geometry step
constexpr double kAcceptRatio = 0.1;  // actual/predicted reduction counted as a success
constexpr double kGrowTrigger = 0.2;  // reduction ratio that re-expands the radius
constexpr double kGrowFactor = 3.0;
constexpr double kShrinkFactor = 0.4;
constexpr double kThinRatio = 0.05;  // edge residual ratio that flags a thin simplex
constexpr double kSingularTol = 1e-12;

double norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

/// Solve A g = rhs by Gaussian elimination with partial pivoting. A is
/// row-major m x m and is destroyed. Returns false when singular.
bool solve_linear(std::vector<double>& A, std::vector<double>& rhs, std::size_t m,
                  std::vector<double>& g) {
    std::vector<std::size_t> perm(m);
    for (std::size_t i = 0; i < m; ++i) perm[i] = i;
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t pivot = col;
        double best = std::abs(A[perm[col] * m + col]);
        for (std::size_t r = col + 1; r < m; ++r) {
            const double v = std::abs(A[perm[r] * m + col]);
            if (v > best) {
                best = v;
                pivot = r;
            }
        }
        if (best < kSingularTol) return false;
        std::swap(perm[col], perm[pivot]);
        const double diag = A[perm[col] * m + col];
        for (std::size_t r = col + 1; r < m; ++r) {
            const double factor = A[perm[r] * m + col] / diag;
            if (factor == 0.0) continue;
            for (std::size_t c = col; c < m; ++c) A[perm[r] * m + c] -= factor * A[perm[col] * m + c];
            rhs[perm[r]] -= factor * rhs[perm[col]];
        }
    }
    g.assign(m, 0.0);
    for (std::size_t col = m; col-- > 0;) {
        double v = rhs[perm[col]];
        for (std::size_t c = col + 1; c < m; ++c) v -= A[perm[col] * m + c] * g[c];
        g[col] = v / A[perm[col] * m + col];
    }
    return true;
}

class Simplex {
public:
    Simplex(std::size_t m) : m_(m), points_(m + 1), values_(m + 1) {}

    std::size_t size() const { return m_ + 1; }
    std::vector<double>& point(std::size_t i) { return points_[i]; }
    const std::vector<double>& point(std::size_t i) const { return points_[i]; }
    double& value(std::size_t i) { return values_[i]; }
    double value(std::size_t i) const { return values_[i]; }

    /// Swap the lowest-value vertex into slot 0.
    void promote_best() {
        std::size_t best = 0;
        for (std::size_t i = 1; i <= m_; ++i)
            if (values_[i] < values_[best]) best = i;
        if (best != 0) {
            std::swap(points_[0], points_[best]);
            std::swap(values_[0], values_[best]);
        }
    }

    std::size_t worst_index() const {
        std::size_t worst = 1;
        for (std::size_t i = 2; i <= m_; ++i)
            if (values_[i] > values_[worst]) worst = i;
        return worst;
    }

    /// Index of the vertex farthest from the best point, with its distance.
    std::pair<std::size_t, double> farthest() const {
        std::size_t idx = 1;
        double dist = -1.0;
        for (std::size_t i = 1; i <= m_; ++i) {
            double d2 = 0.0;
            for (std::size_t k = 0; k < m_; ++k) {
                const double d = points_[i][k] - points_[0][k];
                d2 += d * d;
            }
            if (d2 > dist) {
                dist = d2;
                idx = i;
            }
        }
        return {idx, std::sqrt(std::max(0.0, dist))};
    }

private:
    std::size_t m_;
    std::vector<std::vector<double>> points_;
    std::vector<double> values_;
};

}  // namespace

const char* optimizer_name(OptimizerKind kind) {
    switch (kind) {
        case OptimizerKind::Cobyla: return "cobyla";
    }
    return "?";
}

OptimizerKind parse_optimizer(const std::string& name) {
    if (name == "cobyla" || name == "COBYLA") return OptimizerKind::Cobyla;
    throw std::invalid_argument("unknown optimizer '" + name + "' (cobyla)");
}

void OptimizerConfig::validate() const {
    if (max_iters < 1) throw std::invalid_argument("optimizer max_iters must be >= 1");
    if (!(final_trust_radius < initial_trust_radius))
        throw std::invalid_argument("final trust radius must be below the initial radius");
    if (final_trust_radius <= 0.0)
        throw std::invalid_argument("trust radii must be positive");
}

CobylaResult cobyla_minimize(const Objective& objective, std::span<const double> x0,
                             const OptimizerConfig& config) {
    config.validate();
    const std::size_t m = x0.size();
    if (m == 0) throw std::invalid_argument("cobyla_minimize: empty parameter vector");

    CobylaResult result;
    result.x.assign(x0.begin(), x0.end());
    result.fx = std::numeric_limits<double>::infinity();

    const auto evaluate = [&](const std::vector<double>& x) {
        const double f = objective(x);
        ++result.evaluations;
        if (std::isfinite(f) && f < result.fx) {
            result.fx = f;
            result.x = x;
        }
        result.trace.push_back(result.fx);
        return f;
    };
    const auto budget_left = [&] { return result.evaluations < config.max_iters; };

    Simplex simplex(m);
    double rho = config.initial_trust_radius;

    simplex.point(0).assign(x0.begin(), x0.end());
    simplex.value(0) = evaluate(simplex.point(0));
    if (!std::isfinite(simplex.value(0)))
        throw std::invalid_argument("cobyla_minimize: objective not finite at x0");
    for (std::size_t i = 1; i <= m && budget_left(); ++i) {
        simplex.point(i) = simplex.point(0);
        simplex.point(i)[i - 1] += rho;
        simplex.value(i) = evaluate(simplex.point(i));
    }
    if (result.evaluations < static_cast<int>(m) + 1) {
        result.budget_exhausted = true;
        return result;
    }

    std::vector<double> A(m * m), rhs(m), g(m), direction(m);
    std::vector<std::vector<double>> basis;

    // Replace vertex `target` with best + (rho/2) * d, where d is a unit
    // direction orthogonal to the remaining edges (restores affine
    // independence). Sign follows the model's descent side when available.
    const auto geometry_step = [&](std::size_t target, const std::vector<double>* gradient) {
        basis.clear();
        for (std::size_t i = 1; i <= m; ++i) {
            if (i == target) continue;
            std::vector<double> edge(m);
            for (std::size_t k = 0; k < m; ++k)
                edge[k] = simplex.point(i)[k] - simplex.point(0)[k];
            for (const auto& b : basis) {
                double dot = 0.0;
                for (std::size_t k = 0; k < m; ++k) dot += edge[k] * b[k];
                for (std::size_t k = 0; k < m; ++k) edge[k] -= dot * b[k];
            }
            const double len = norm(edge);
            if (len > 1e-14) {
                for (double& v : edge) v /= len;
                basis.push_back(std::move(edge));
            }
        }
        // The coordinate axis least covered by the span, orthogonalized.
        std::size_t best_axis = 0;
        double best_residual = -1.0;
        for (std::size_t axis = 0; axis < m; ++axis) {
            double covered = 0.0;
            for (const auto& b : basis) covered += b[axis] * b[axis];
            const double residual = 1.0 - covered;
            if (residual > best_residual) {
                best_residual = residual;
                best_axis = axis;
            }
        }
        std::fill(direction.begin(), direction.end(), 0.0);
        direction[best_axis] = 1.0;
        for (const auto& b : basis) {
            double dot = b[best_axis];
            for (std::size_t k = 0; k < m; ++k) direction[k] -= dot * b[k];
        }
        const double len = norm(direction);
        if (len < 1e-14) {
            // Span already complete; refresh the vertex along its own axis.
            std::fill(direction.begin(), direction.end(), 0.0);
            direction[(target - 1) % m] = 1.0;
        } else {
            for (double& v : direction) v /= len;
        }
        if (gradient) {
            double dot = 0.0;
            for (std::size_t k = 0; k < m; ++k) dot += (*gradient)[k] * direction[k];
            if (dot > 0.0)
                for (double& v : direction) v = -v;
        }
        std::vector<double> candidate(m);
        for (std::size_t k = 0; k < m; ++k)
            candidate[k] = simplex.point(0)[k] + 0.5 * rho * direction[k];
        const double f = evaluate(candidate);
        simplex.point(target) = std::move(candidate);
        simplex.value(target) = f;
    };

    while (budget_left()) {
        simplex.promote_best();

        // Linear interpolation model around the best vertex.
        for (std::size_t i = 1; i <= m; ++i) {
            for (std::size_t k = 0; k < m; ++k)
                A[(i - 1) * m + k] = simplex.point(i)[k] - simplex.point(0)[k];
            rhs[i - 1] = simplex.value(i) - simplex.value(0);
        }
        std::vector<double> A_copy = A, rhs_copy = rhs;
        const bool solved = solve_linear(A_copy, rhs_copy, m, g);

        const auto [far_idx, far_dist] = simplex.farthest();
        if (!solved) {
            geometry_step(far_idx, nullptr);
            continue;
        }
        if (far_dist > kFarFactor * rho) {
            geometry_step(far_idx, &g);
            continue;
        }

        // Thin-simplex guard: orthogonalize the edges in order and flag the
        // first one that is nearly dependent on the previous ones.
        {
            basis.clear();
            std::size_t thin_idx = 0;
            double thin_ratio = 1.0;
            for (std::size_t i = 1; i <= m; ++i) {
                std::vector<double> edge(m);
                for (std::size_t k = 0; k < m; ++k)
                    edge[k] = simplex.point(i)[k] - simplex.point(0)[k];
                const double full = norm(edge);
                for (const auto& b : basis) {
                    double dot = 0.0;
                    for (std::size_t k = 0; k < m; ++k) dot += edge[k] * b[k];
                    for (std::size_t k = 0; k < m; ++k) edge[k] -= dot * b[k];
                }
                const double residual = norm(edge);
                const double ratio = full > 0.0 ? residual / full : 0.0;
                if (ratio < thin_ratio) {
                    thin_ratio = ratio;
                    thin_idx = i;
                }
                if (residual > 1e-14) {
                    for (double& v : edge) v /= residual;
                    basis.push_back(std::move(edge));
                }
            }
            if (thin_ratio < kThinRatio && thin_idx != 0) {
                geometry_step(thin_idx, &g);
                continue;
            }
        }

        const double gnorm = norm(g);
        if (gnorm < 1e-14) {
            // Flat model: either done at this resolution or shrink and retry.
            if (rho <= config.final_trust_radius * 1.0000001) break;
            rho = std::max(rho * kShrinkFactor, config.final_trust_radius);
            continue;
        }

        std::vector<double> candidate(m);
        for (std::size_t k = 0; k < m; ++k)
            candidate[k] = simplex.point(0)[k] - rho * g[k] / gnorm;
        const double predicted = rho * gnorm;
        const double f_best_before = simplex.value(0);
        const double f_new = evaluate(candidate);
        const double actual = f_best_before - f_new;

        // Always fold the evaluated point into the simplex so the model
        // keeps learning the local landscape: drop the worst vertex when the
        // step improved on it, otherwise the stalest (farthest) one.
        if (std::isfinite(f_new)) {
            const std::size_t worst = simplex.worst_index();
            const std::size_t drop = f_new < simplex.value(worst) ? worst : far_idx;
            simplex.point(drop) = std::move(candidate);
            simplex.value(drop) = f_new;
        }

        if (actual >= kGrowTrigger * predicted) {
            // The model tracks the objective well at this radius; allow the
            // next step to stretch again after earlier shrinking.
            rho = std::min(rho * kGrowFactor, config.initial_trust_radius);
        } else if (!(actual >= kAcceptRatio * predicted)) {
            if (rho <= config.final_trust_radius * 1.0000001) break;
            rho = std::max(rho * kShrinkFactor, config.final_trust_radius);
        }
    }

    result.budget_exhausted = !budget_left();
    return result;
}

}  // namespace qmlx::vqc
