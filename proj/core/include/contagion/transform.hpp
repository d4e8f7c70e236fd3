#pragma once

#include "contagion/abel.hpp"
#include "contagion/model.hpp"

#include <complex>
#include <functional>
#include <memory>
#include <vector>

namespace contagion {

using complex = std::complex<double>;

enum class Method { closed_form, ode };

const char* to_string(Method method) noexcept;

/// Solution B(t) on [0, T] of the backward equation together with the two
/// time integrals ∫B and ∫B² that make up c(T) − c(0).
class BPath {
public:
    BPath(Method method, double horizon, complex v, complex b0, complex integral_b,
          complex integral_b2, std::function<complex(double)> evaluator);

    Method method() const noexcept { return method_; }
    double horizon() const noexcept { return horizon_; }
    complex v() const noexcept { return v_; }
    complex b0() const noexcept { return b0_; }
    complex integral_b() const noexcept { return integral_b_; }
    complex integral_b2() const noexcept { return integral_b2_; }
    /// B(t), t ∈ [0, T].
    complex at(double t) const { return evaluator_(t); }

private:
    Method method_;
    double horizon_;
    complex v_;
    complex b0_;
    complex integral_b_;
    complex integral_b2_;
    std::function<complex(double)> evaluator_;
};

struct TransformResult {
    complex value;    ///< E[θ^N(T) e^{−vλ(T)} | λ₀]
    complex b0;
    complex c_delta;  ///< c(T) − c(0)
    complex theta;
    double v = 0.0;
    double horizon = 0.0;
    Method method = Method::closed_form;
};

/// Parametric route; real θ ∈ [0, 1], v ≥ 0.
BPath solve_b_closed_form(const ContagionParams& params, double theta, double v, double horizon);

/// Integrates B backward from T with an embedded 5(4) pair. Accepts complex θ
/// with |θ| ≤ 1; throws NumericalError if the path approaches β + B = 0.
BPath solve_b_ode(const ContagionParams& params, complex theta, double v, double horizon,
                  const TransformOptions& opts = {});

/// c(T) − c(0) = ∫₀ᵀ (δη·B − ½σ²·B²) ds (sign of the σ² term per `opts`).
complex c_delta(const BPath& path, const ContagionParams& params, const TransformOptions& opts = {});

/// exp(−B(0)λ₀ − (c(T) − c(0))). Real θ ∈ [0, 1] uses the closed form, anything
/// else the ODE; `method` forces a route.
TransformResult joint_transform(const ContagionParams& params, complex theta, double v,
                                double horizon, const TransformOptions& opts = {});
TransformResult joint_transform(const ContagionParams& params, complex theta, double v,
                                double horizon, Method method, const TransformOptions& opts = {});

/// PGF-type transform at several horizons from a single backward integration.
/// The equation for B is autonomous, so B(0; T) is the flow of the terminal
/// value over time T and every horizon lies on one trajectory.
std::vector<TransformResult> transform_curve(const ContagionParams& params, complex theta, double v,
                                             const std::vector<double>& horizons,
                                             const TransformOptions& opts = {});

}  // namespace contagion
