#include "contagion/abel.hpp"

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <string>

namespace contagion {

AbelConstants AbelConstants::from(const ContagionParams& p, double theta, double v)
{
    const double one_plus = 1.0 + p.beta * p.delta;
    AbelConstants c;
    c.alpha1 = -p.beta * theta * p.delta / (one_plus * one_plus);
    c.alpha2 = -p.beta * theta / one_plus;
    // (β+v)α₁/α₂ with the common θ cancelled, so θ = 0 stays well defined.
    c.u0 = (p.beta + v) * p.delta / one_plus;
    c.discriminant = 1.0 + 4.0 * c.alpha1;
    return c;
}

AbelConstants AbelConstants::from_coefficients(double alpha1, double alpha2, double u0)
{
    return AbelConstants{alpha1, alpha2, u0, 1.0 + 4.0 * alpha1};
}

double antiderivative(double s, const AbelConstants& c)
{
    const double q = s * s - s - c.alpha1;
    const double d = c.discriminant;
    const double x = 2.0 * s - 1.0;
    if (std::abs(d) <= kPoleTolerance) {
        if (std::abs(x) <= 2.0 * kPoleTolerance)
            throw NumericalError("antiderivative evaluated at the double root s=1/2");
        return 0.5 * std::log(std::abs(q)) - 1.0 / x;
    }
    if (d < 0.0) {
        const double r = std::sqrt(-d);
        return 0.5 * std::log(q) + std::atan(x / r) / r;
    }
    const double r = std::sqrt(d);
    if (std::abs(x - r) <= 2.0 * kPoleTolerance || std::abs(x + r) <= 2.0 * kPoleTolerance) {
        throw NumericalError("antiderivative evaluated within " + std::to_string(kPoleTolerance) +
                             " of a root of s^2 - s - alpha1 (s=" + std::to_string(s) + ")");
    }
    return 0.5 * std::log(std::abs(q)) + 0.5 * std::log(std::abs((x - r) / (x + r))) / r;
}

double time_of_parameter(double u, const AbelConstants& c, const ContagionParams& params,
                         double horizon)
{
    return horizon - (antiderivative(c.u0, c) - antiderivative(u, c)) / params.delta;
}

double time_derivative(double u, const AbelConstants& c, double delta)
{
    return u / (delta * (u * u - u - c.alpha1));
}

ParametricSolution::ParametricSolution(const ContagionParams& params, double theta, double v,
                                       double horizon)
    : constants_(AbelConstants::from(params, theta, v)),
      horizon_(horizon),
      v_(v),
      theta_(theta),
      delta_(params.delta)
{
    if (!(theta >= 0.0 && theta <= 1.0)) throw ConfigError("closed form requires theta in [0, 1]");
    if (!(v >= 0.0)) throw ConfigError("closed form requires v >= 0");
    if (!(horizon >= 0.0)) throw ConfigError("horizon must be >= 0");
    const double bd = params.beta * params.delta;
    if (!(bd > 1.0)) throw ConfigError("closed form requires beta*delta > 1");

    const double excess = bd - 1.0;
    const double disc = excess * excess + 4.0 * bd * (1.0 - theta);
    // Positive root of δB² + (δβ − 1)B − β(1 − θ) = 0, in cancellation-free form.
    b_fixed_ = 2.0 * params.beta * (1.0 - theta) / (excess + std::sqrt(disc));
    slope_ = (1.0 + bd) / params.delta;
    u_plus_ = (params.beta + b_fixed_) / slope_;
    sqrt_d_ = (excess + 2.0 * params.delta * b_fixed_) / (1.0 + bd);
    w0_ = (v - b_fixed_) / slope_;
    w_star_ = offset_at(0.0);
}

double ParametricSolution::offset_at(double t) const
{
    if (w0_ == 0.0) return 0.0;
    const double elapsed = delta_ * (horizon_ - t);
    if (elapsed <= 0.0) return w0_;

    // I(u₀) − I(u) = −a·z + b·ln((w₀ + √D)/(w + √D)),  w = w₀e^z.
    const double a = 0.5 + 0.5 / sqrt_d_;
    const double b = 0.5 - 0.5 / sqrt_d_;
    auto residual = [&](double z) {
        const double w = w0_ * std::exp(z);
        return -a * z + b * std::log((w0_ + sqrt_d_) / (w + sqrt_d_)) - elapsed;
    };
    auto slope = [&](double z) {
        const double w = w0_ * std::exp(z);
        return -a - b * w / (w + sqrt_d_);
    };

    // residual(−elapsed − 1) >= 1 and residual(0) = −elapsed < 0 bracket the root
    constexpr std::uintmax_t kMaxIter = 200;
    std::uintmax_t iterations = kMaxIter;
    double z;
    try {
        z = boost::math::tools::newton_raphson_iterate(
            [&](double x) { return std::make_pair(residual(x), slope(x)); }, -elapsed / a, -elapsed - 1.0,
            0.0, std::numeric_limits<double>::digits - 3, iterations);
    } catch (const std::exception& e) {
        throw NumericalError("root of t(u) = " + std::to_string(t) + " not found: " + e.what());
    }
    if (iterations >= kMaxIter)
        throw NumericalError("root of t(u) = " + std::to_string(t) + " did not converge");
    return w0_ * std::exp(z);
}

double ParametricSolution::b(double t) const
{
    return b_fixed_ + slope_ * offset_at(t);
}

double ParametricSolution::u_at(double t) const
{
    return u_plus_ + offset_at(t);
}

// With u = u₊ + w and x = w + √D, the parameter-space integrands of
// ∫(B − B*)dt and ∫(B² − B*²)dt reduce to polynomials in x plus a multiple of 1/x.

double ParametricSolution::integral_b() const
{
    // (B − B*)·dt/du = (k/δ)·(u₊ + w)/(w + √D) = (k/δ)·(1 + (u₊ − √D)/x).
    const double span = w0_ - w_star_;
    const double log_ratio = std::log1p(span / (w_star_ + sqrt_d_));
    return b_fixed_ * horizon_ + slope_ / delta_ * (span + (u_plus_ - sqrt_d_) * log_ratio);
}

double ParametricSolution::integral_b2() const
{
    // (B² − B*²)·dt/du = (k/δ)·(kx + 2B* + ku₊ − 2k√D + R/x).
    const double k = slope_;
    const double c = sqrt_d_;
    const double x0 = w0_ + c;
    const double x1 = w_star_ + c;
    const double span = w0_ - w_star_;
    const double linear = 2.0 * b_fixed_ + k * u_plus_ - 2.0 * k * c;
    const double residue = k * c * c - (2.0 * b_fixed_ + k * u_plus_) * c + 2.0 * b_fixed_ * u_plus_;
    const double poly = 0.5 * k * span * (x0 + x1) + linear * span;
    return b_fixed_ * b_fixed_ * horizon_ +
           k / delta_ * (poly + residue * std::log1p(span / x1));
}

}  // namespace contagion
