#pragma once

// Reference computations used only by the tests. Each one reaches the
// quantity by a route that shares no code with the engine.

#include "contagion/model.hpp"

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/poisson.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace oracle {

/// Adaptive Gauss–Kronrod (61 points) on [a, b].
inline double integrate(const std::function<double(double)>& f, double a, double b)
{
    using boost::math::quadrature::gauss_kronrod;
    return gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13);
}

/// ∫_{s1}^{s2} s/(s² − s − α₁) ds.
inline double abel_kernel_integral(double alpha1, double s1, double s2)
{
    return integrate([alpha1](double s) { return s / (s * s - s - alpha1); }, s1, s2);
}

/// E[θ^N(T) e^{−vλ(T)}] by a fixed-step classical RK4 on (B, ∫B, ∫B²),
/// marching backward from B(T) = v.
inline double rk4_transform(const contagion::ContagionParams& p, double theta, double v,
                            double horizon, int steps = 20000)
{
    using State = std::array<double, 3>;
    auto rhs = [&](const State& y) {
        const double b = y[0];
        // d/dτ with τ = T − t
        return State{-(p.delta * b + theta * p.beta / (p.beta + b) - 1.0), b, b * b};
    };
    State y{v, 0.0, 0.0};
    const double h = horizon / steps;
    auto axpy = [](const State& a, double s, const State& k) {
        return State{a[0] + s * k[0], a[1] + s * k[1], a[2] + s * k[2]};
    };
    for (int i = 0; i < steps; ++i) {
        const State k1 = rhs(y);
        const State k2 = rhs(axpy(y, 0.5 * h, k1));
        const State k3 = rhs(axpy(y, 0.5 * h, k2));
        const State k4 = rhs(axpy(y, h, k3));
        for (int j = 0; j < 3; ++j) y[j] += h / 6.0 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
    }
    const double c = p.delta * p.eta * y[1] - 0.5 * p.sigma * p.sigma * y[2];
    return std::exp(-y[0] * p.lambda0 - c);
}

/// Integrated intensity when σ = 0 and jumps vanish: λ(t) = η + (λ₀ − η)e^{−δt}.
inline double deterministic_compensator(const contagion::ContagionParams& p, double horizon)
{
    return p.eta * horizon + (p.lambda0 - p.eta) * (1.0 - std::exp(-p.delta * horizon)) / p.delta;
}

/// E[N(T)] = λ̄T + (λ₀ − λ̄)(1 − e^{−κT})/κ with κ = δ − 1/β.
inline double expected_count(const contagion::ContagionParams& p, double horizon)
{
    const double kappa = p.delta - 1.0 / p.beta;
    const double mean = p.delta * p.eta / kappa;
    return mean * horizon + (p.lambda0 - mean) * (1.0 - std::exp(-kappa * horizon)) / kappa;
}

/// E[λ(t)] = λ̄ + (λ₀ − λ̄)e^{−κt}.
inline double expected_intensity(const contagion::ContagionParams& p, double t)
{
    const double kappa = p.delta - 1.0 / p.beta;
    const double mean = p.delta * p.eta / kappa;
    return mean + (p.lambda0 - mean) * std::exp(-kappa * t);
}

inline double binomial_pmf(int n, double p, int j)
{
    return boost::math::pdf(boost::math::binomial_distribution<double>(n, p), j);
}

inline double poisson_pmf(double mean, int n)
{
    if (mean == 0.0) return n == 0 ? 1.0 : 0.0;
    return boost::math::pdf(boost::math::poisson_distribution<double>(mean), n);
}

/// P(D = j) by enumerating every default pattern of `marginals.size()`
/// firms for each common count n, with p_n(i) = marginal(n, i).
inline std::vector<double> enumerate_defaults(std::span<const double> common_pmf, int n_firms,
                                              const std::function<double(int, int)>& marginal)
{
    std::vector<double> out(n_firms + 1, 0.0);
    for (std::size_t n = 0; n < common_pmf.size(); ++n) {
        for (std::uint32_t mask = 0; mask < (1u << n_firms); ++mask) {
            double w = common_pmf[n];
            for (int i = 0; i < n_firms; ++i) {
                const double p = marginal(static_cast<int>(n), i);
                w *= (mask >> i) & 1u ? p : 1.0 - p;
            }
            out[std::popcount(mask)] += w;
        }
    }
    return out;
}

}  // namespace oracle
