#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace qmlx::vqc {

enum class OptimizerKind { Cobyla };

const char* optimizer_name(OptimizerKind kind);
OptimizerKind parse_optimizer(const std::string& name);

struct OptimizerConfig {
    OptimizerKind kind = OptimizerKind::Cobyla;
    int max_iters = 500;  // objective evaluation budget
    double initial_trust_radius = 1.0;
    double final_trust_radius = 1e-4;
    std::uint64_t seed = 0;  // unused by COBYLA (deterministic); kept for the interface

    void validate() const;
};

struct CobylaResult {
    std::vector<double> x;  // best point found
    double fx = 0.0;
    std::vector<double> trace;  // best-so-far objective after each evaluation
    int evaluations = 0;
    bool budget_exhausted = false;
};

using Objective = std::function<double(std::span<const double>)>;

/// Powell-style COBYLA specialized to unconstrained objectives: keeps an
/// m+1-point simplex, fits a linear interpolation model through it, and takes
/// steps of the current trust radius along the model's descent direction.
/// Vertices that drift too far, or a degenerate simplex, trigger a geometry
/// step instead; the radius halves when a model step fails with sound
/// geometry and the run stops once it reaches final_trust_radius. The
/// returned trace is non-increasing.
CobylaResult cobyla_minimize(const Objective& objective, std::span<const double> x0,
                             const OptimizerConfig& config);

}  // namespace qmlx::vqc
