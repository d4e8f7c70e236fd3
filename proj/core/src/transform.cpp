#include "contagion/transform.hpp"

#include "contagion/numerics.hpp"

#include <algorithm>
#include <numeric>

namespace contagion {

const char* to_string(Method method) noexcept
{
    return method == Method::ode ? "ode" : "closed_form";
}

BPath::BPath(Method method, double horizon, complex v, complex b0, complex integral_b,
             complex integral_b2, std::function<complex(double)> evaluator)
    : method_(method),
      horizon_(horizon),
      v_(v),
      b0_(b0),
      integral_b_(integral_b),
      integral_b2_(integral_b2),
      evaluator_(std::move(evaluator))
{
}

namespace {

using State = std::array<complex, 3>;

double diffusion_factor(const TransformOptions& opts)
{
    return opts.diffusion_sign == DiffusionSign::derived ? -0.5 : 0.5;
}

complex combine_c(const ContagionParams& p, complex integral_b, complex integral_b2,
                  const TransformOptions& opts)
{
    return p.delta * p.eta * integral_b + diffusion_factor(opts) * p.sigma * p.sigma * integral_b2;
}

bool is_real_unit(complex theta, double v)
{
    return theta.imag() == 0.0 && theta.real() >= 0.0 && theta.real() <= 1.0 && v >= 0.0;
}

struct ContagionFlow {
    const ContagionParams& p;
    complex theta;

    // s = T − t; the state is (B, ∫B, ∫B²).
    State operator()(double, const State& y) const
    {
        const complex b = y[0];
        return {1.0 - p.delta * b - theta * p.beta / (p.beta + b), b, b * b};
    }
};

void require_ode_inputs(const ContagionParams& p, complex theta, double v)
{
    if (std::abs(theta) > 1.0 + 1e-12) throw ConfigError("ODE route requires |theta| <= 1");
    if (!(v >= 0.0)) throw ConfigError("ODE route requires v >= 0");
    if (!(p.beta * p.delta > 1.0)) throw ConfigError("transform requires beta*delta > 1");
}

auto pole_guard(double beta)
{
    return [beta](const State& y) {
        if (std::abs(beta + y[0]) < 1e-6 * beta)
            throw NumericalError("singular path: beta + B(t) approached 0");
    };
}

numerics::OdeOptions ode_options(const TransformOptions& opts, double horizon)
{
    numerics::OdeOptions o;
    o.abs_tol = opts.tolerance;
    o.rel_tol = opts.tolerance;
    o.max_step = std::max(0.05, horizon / 8.0);
    o.initial_step = 1e-3;
    return o;
}

}  // namespace

BPath solve_b_closed_form(const ContagionParams& params, double theta, double v, double horizon)
{
    auto solution = std::make_shared<ParametricSolution>(params, theta, v, horizon);
    return BPath(Method::closed_form, horizon, v, solution->b0(), solution->integral_b(),
                 solution->integral_b2(), [solution](double t) { return complex(solution->b(t)); });
}

BPath solve_b_ode(const ContagionParams& params, complex theta, double v, double horizon,
                  const TransformOptions& opts)
{
    require_ode_inputs(params, theta, v);
    auto trace = std::make_shared<std::vector<numerics::OdeNode<3>>>();
    const auto end = numerics::integrate_ode<3>(ContagionFlow{params, theta}, State{v, 0.0, 0.0},
                                                {horizon}, ode_options(opts, horizon),
                                                pole_guard(params.beta), trace.get())
                         .back();
    return BPath(Method::ode, horizon, v, end[0], end[1], end[2], [trace, horizon](double t) {
        return numerics::dense_value(*trace, horizon - t)[0];
    });
}

complex c_delta(const BPath& path, const ContagionParams& params, const TransformOptions& opts)
{
    return combine_c(params, path.integral_b(), path.integral_b2(), opts);
}

TransformResult joint_transform(const ContagionParams& params, complex theta, double v,
                                double horizon, Method method, const TransformOptions& opts)
{
    const BPath path = method == Method::closed_form
                           ? solve_b_closed_form(params, theta.real(), v, horizon)
                           : solve_b_ode(params, theta, v, horizon, opts);
    TransformResult result;
    result.b0 = path.b0();
    result.c_delta = c_delta(path, params, opts);
    result.value = std::exp(-result.b0 * params.lambda0 - result.c_delta);
    result.theta = theta;
    result.v = v;
    result.horizon = horizon;
    result.method = method;
    return result;
}

TransformResult joint_transform(const ContagionParams& params, complex theta, double v,
                                double horizon, const TransformOptions& opts)
{
    return joint_transform(params, theta, v, horizon,
                           is_real_unit(theta, v) ? Method::closed_form : Method::ode, opts);
}

std::vector<TransformResult> transform_curve(const ContagionParams& params, complex theta, double v,
                                             const std::vector<double>& horizons,
                                             const TransformOptions& opts)
{
    require_ode_inputs(params, theta, v);
    std::vector<std::size_t> order(horizons.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return horizons[a] < horizons[b]; });
    std::vector<double> stops;
    stops.reserve(horizons.size());
    for (auto i : order) {
        if (horizons[i] < 0.0) throw ConfigError("horizons must be >= 0");
        stops.push_back(horizons[i]);
    }
    const double longest = stops.empty() ? 0.0 : stops.back();
    const auto states = numerics::integrate_ode<3>(ContagionFlow{params, theta}, State{v, 0.0, 0.0},
                                                   stops, ode_options(opts, longest),
                                                   pole_guard(params.beta));
    std::vector<TransformResult> out(horizons.size());
    for (std::size_t j = 0; j < order.size(); ++j) {
        const auto& y = states[j];
        auto& r = out[order[j]];
        r.b0 = y[0];
        r.c_delta = combine_c(params, y[1], y[2], opts);
        r.value = std::exp(-r.b0 * params.lambda0 - r.c_delta);
        r.theta = theta;
        r.v = v;
        r.horizon = horizons[order[j]];
        r.method = Method::ode;
    }
    return out;
}

}  // namespace contagion
