#pragma once

#include "contagion/abel.hpp"
#include "contagion/model.hpp"
#include "contagion/transform.hpp"

#include <variant>
#include <vector>

namespace contagion {

/// Homogeneous Poisson event arrivals.
struct PoissonProcess {
    double rate = 0.0;
};

/// Cox process whose intensity follows the same mean-reverting jump diffusion
/// as the contagion process, but with jumps arriving at the times of an
/// independent Poisson(jump_rate) clock rather than at its own events.
struct AffineNoSelfProcess {
    ContagionParams params;
    double jump_rate = 0.0;
};

using CountingProcess = std::variant<ContagionParams, PoissonProcess, AffineNoSelfProcess>;

/// E[θ^{N(t)}] at every horizon in `horizons` (any order), for complex |θ| ≤ 1.
std::vector<complex> pgf_curve(const CountingProcess& process, complex theta,
                               const std::vector<double>& horizons,
                               const TransformOptions& opts = {});

/// E[θ^{N(t)}] for real θ ∈ [0, 1]; the contagion process uses the closed form.
double pgf(const CountingProcess& process, double theta, double horizon,
           const TransformOptions& opts = {});

/// Long-run mean intensity E[λ(∞)].
double stationary_mean_intensity(const CountingProcess& process);

/// Affine coefficient B(0) for the no-self-excitation model in closed form:
/// B solves B' = δB + θ − 1 backward from B(T) = v.
complex affine_no_self_b0(const ContagionParams& params, complex theta, double v, double horizon);

}  // namespace contagion
