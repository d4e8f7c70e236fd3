#include "contagion/process.hpp"

#include <algorithm>
#include <numeric>

namespace contagion {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::vector<complex> no_self_curve(const AffineNoSelfProcess& process, complex theta,
                                   const std::vector<double>& horizons,
                                   const TransformOptions& opts)
{
    const auto& p = process.params;
    const complex level = (1.0 - theta) / p.delta;
    const complex a = p.beta + level;
    const complex b = -level;  // B(s) = level + b e^{-δs}
    const double diffusion = opts.diffusion_sign == DiffusionSign::derived ? -0.5 : 0.5;
    std::vector<complex> out;
    out.reserve(horizons.size());
    for (double s : horizons) {
        if (s < 0.0) throw ConfigError("horizons must be >= 0");
        const double e1 = -std::expm1(-p.delta * s) / p.delta;
        const double e2 = -std::expm1(-2.0 * p.delta * s) / (2.0 * p.delta);
        const complex int_b = level * s + b * e1;
        const complex int_b2 = level * level * s + 2.0 * level * b * e1 + b * b * e2;
        // ∫ B/(β+B) = s − β ∫ 1/(a + b e^{-δs}); Re(a + b e^{-δs}) ≥ β keeps the log on its principal branch
        const complex int_jump =
            s - p.beta / a * (s + std::log((a + b * std::exp(-p.delta * s)) / (a + b)) / p.delta);
        const complex c = p.delta * p.eta * int_b + diffusion * p.sigma * p.sigma * int_b2 +
                          process.jump_rate * int_jump;
        out.push_back(std::exp(-affine_no_self_b0(p, theta, 0.0, s) * p.lambda0 - c));
    }
    return out;
}

}  // namespace

complex affine_no_self_b0(const ContagionParams& p, complex theta, double v, double horizon)
{
    const complex level = (1.0 - theta) / p.delta;
    return level + (v - level) * std::exp(-p.delta * horizon);
}

std::vector<complex> pgf_curve(const CountingProcess& process, complex theta,
                               const std::vector<double>& horizons, const TransformOptions& opts)
{
    return std::visit(
        overloaded{
            [&](const ContagionParams& p) {
                std::vector<complex> out;
                out.reserve(horizons.size());
                for (const auto& r : transform_curve(p, theta, 0.0, horizons, opts))
                    out.push_back(r.value);
                return out;
            },
            [&](const PoissonProcess& p) {
                std::vector<complex> out;
                out.reserve(horizons.size());
                for (double t : horizons) out.push_back(std::exp(p.rate * t * (theta - 1.0)));
                return out;
            },
            [&](const AffineNoSelfProcess& p) { return no_self_curve(p, theta, horizons, opts); },
        },
        process);
}

double pgf(const CountingProcess& process, double theta, double horizon,
           const TransformOptions& opts)
{
    if (const auto* p = std::get_if<ContagionParams>(&process)) {
        return joint_transform(*p, theta, 0.0, horizon, Method::closed_form, opts).value.real();
    }
    return pgf_curve(process, theta, {horizon}, opts).front().real();
}

double stationary_mean_intensity(const CountingProcess& process)
{
    return std::visit(overloaded{
                          [](const ContagionParams& p) { return p.stationary_mean_intensity(); },
                          [](const PoissonProcess& p) { return p.rate; },
                          [](const AffineNoSelfProcess& p) {
                              return p.params.eta + p.jump_rate / (p.params.delta * p.params.beta);
                          },
                      },
                      process);
}

}  // namespace contagion
