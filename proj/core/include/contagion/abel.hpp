#pragma once

// Parametric closed-form solution of the Riccati-type equation for B(t).
//
// Writing B = k·u − β with k = (1 + δβ)/δ turns the backward equation
//
//   B'(t) = δB + θβ/(β + B) − 1,   B(T) = v
//
// into dt/du = u / (δ(u² − u − α₁)), so t(u) = T − (I(u₀) − I(u))/δ where I is
// an antiderivative of s/(s² − s − α₁). The sign of D = 1 + 4α₁ selects the
// arctan, logarithmic or rational branch of I.

#include "contagion/model.hpp"

namespace contagion {

/// Which sign the diffusion contribution carries in c'(t). `derived` is the
/// generator-consistent form c' = δηB − ½σ²B²; `printed` flips it and exists
/// only to demonstrate that the Monte Carlo oracle rejects it.
enum class DiffusionSign { derived, printed };

struct TransformOptions {
    DiffusionSign diffusion_sign = DiffusionSign::derived;
    double tolerance = 1e-10;  ///< ODE local and quadrature absolute tolerance
};

struct AbelConstants {
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double u0 = 0.0;
    double discriminant = 1.0;  ///< D = 1 + 4α₁

    /// α₁ = −βθδ/(1+βδ)², α₂ = −βθ/(1+βδ), u₀ = (β+v)δ/(1+βδ).
    static AbelConstants from(const ContagionParams& params, double theta, double v);
    /// Direct construction, used to exercise every branch of the antiderivative.
    static AbelConstants from_coefficients(double alpha1, double alpha2, double u0);
};

inline constexpr double kPoleTolerance = 1e-12;

/// I(s) = ½ ln|s² − s − α₁| + ½ J(s), branch chosen by the sign of D.
/// Throws NumericalError when s is within kPoleTolerance of a real root.
double antiderivative(double s, const AbelConstants& constants);

/// t(u) = T − (I(u₀) − I(u))/δ.
double time_of_parameter(double u, const AbelConstants& constants, const ContagionParams& params,
                         double horizon);

/// dt/du = u / (δ(u² − u − α₁)).
double time_derivative(double u, const AbelConstants& constants, double delta);

/// Closed-form B path for real θ ∈ [0, 1], v ≥ 0.
///
/// For admissible parameters the discriminant is strictly positive and u₀ lies
/// in the pole-free interval bounded by the fixed point u₊ = (β + B*)/k, which
/// B approaches exponentially fast as t decreases. The root of t(u) = 0 is
/// therefore located in the log-distance z = ln((u − u₊)/(u₀ − u₊)), where the
/// time map is strictly monotone with slope at least 1 and the bracket
/// [−δT, 0] always contains the root.
class ParametricSolution {
public:
    ParametricSolution(const ContagionParams& params, double theta, double v, double horizon);

    const AbelConstants& constants() const noexcept { return constants_; }
    double horizon() const noexcept { return horizon_; }
    double v() const noexcept { return v_; }
    double theta() const noexcept { return theta_; }

    /// Stationary solution B* (the fixed point the backward flow approaches).
    double fixed_point() const noexcept { return b_fixed_; }
    /// Parameter value u* with t(u*) = 0.
    double u_star() const noexcept { return u_plus_ + w_star_; }
    double b0() const noexcept { return b_fixed_ + slope_ * w_star_; }
    /// B(t) for t ∈ [0, T].
    double b(double t) const;
    /// u such that t(u) = t.
    double u_at(double t) const;

    /// ∫₀ᵀ B(s) ds and ∫₀ᵀ B(s)² ds via the change of variables to u.
    double integral_b() const;
    double integral_b2() const;

private:
    double offset_at(double t) const;

    AbelConstants constants_;
    double horizon_;
    double v_;
    double theta_;
    double delta_;
    double slope_;      // k = (1 + δβ)/δ
    double b_fixed_;    // B*
    double u_plus_;     // (β + B*)/k
    double sqrt_d_;     // u₊ − u₋
    double w0_;         // u₀ − u₊
    double w_star_;     // u* − u₊
};

}  // namespace contagion
