#pragma once

// Complex-state ODE integration on top of Boost.Odeint's dense-output
// Dormand–Prince 5(4) stepper. The state is stored as interleaved real and
// imaginary parts so the standard array algebra applies.

#include "contagion/model.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace contagion::numerics {

/// Accepted step of an ODE integration, kept for dense output.
template <std::size_t N>
struct OdeNode {
    double s;
    std::array<std::complex<double>, N> y;
    std::array<std::complex<double>, N> dy;
};

struct OdeOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    double initial_step = 1e-3;
    double max_step = 0.5;
    int max_steps = 1'000'000;
};

namespace detail {

template <std::size_t N>
std::array<double, 2 * N> pack(const std::array<std::complex<double>, N>& y)
{
    std::array<double, 2 * N> x;
    for (std::size_t i = 0; i < N; ++i) {
        x[2 * i] = y[i].real();
        x[2 * i + 1] = y[i].imag();
    }
    return x;
}

template <std::size_t N>
std::array<std::complex<double>, N> unpack(const std::array<double, 2 * N>& x)
{
    std::array<std::complex<double>, N> y;
    for (std::size_t i = 0; i < N; ++i) y[i] = {x[2 * i], x[2 * i + 1]};
    return y;
}

}  // namespace detail

/// Integrates dy/ds = rhs(s, y) from s = 0 and returns the state at every
/// entry of `stops` (ascending, nonnegative). `guard(y)` runs after each
/// accepted step and may throw to abort a singular path. When `trace` is
/// given, every accepted node is appended for Hermite dense output.
template <std::size_t N, class Rhs, class Guard>
std::vector<std::array<std::complex<double>, N>> integrate_ode(
    Rhs&& rhs, std::array<std::complex<double>, N> y0, const std::vector<double>& stops,
    const OdeOptions& opts, Guard&& guard, std::vector<OdeNode<N>>* trace = nullptr)
{
    namespace odeint = boost::numeric::odeint;
    using Real = std::array<double, 2 * N>;

    auto system = [&](const Real& x, Real& dxdt, double s) {
        dxdt = detail::pack<N>(rhs(s, detail::unpack<N>(x)));
    };
    auto stepper = odeint::make_dense_output(opts.abs_tol, opts.rel_tol, opts.max_step,
                                             odeint::runge_kutta_dopri5<Real>());
    stepper.initialize(detail::pack<N>(y0), 0.0, opts.initial_step);
    if (trace) trace->push_back({0.0, y0, rhs(0.0, y0)});

    std::vector<std::array<std::complex<double>, N>> at_stops;
    at_stops.reserve(stops.size());
    int steps = 0;
    try {
        for (double stop : stops) {
            if (stop <= 0.0) {
                at_stops.push_back(y0);
                continue;
            }
            while (stepper.current_time() < stop) {
                if (++steps > opts.max_steps)
                    throw NumericalError("ODE integration exceeded its step budget");
                stepper.do_step(system);
                const auto y = detail::unpack<N>(stepper.current_state());
                guard(y);
                if (trace) trace->push_back({stepper.current_time(), y, rhs(stepper.current_time(), y)});
            }
            Real x;
            stepper.calc_state(stop, x);
            at_stops.push_back(detail::unpack<N>(x));
        }
    } catch (const odeint::step_adjustment_error& e) {
        throw NumericalError(std::string("ODE step size control failed: ") + e.what());
    }
    return at_stops;
}

/// Cubic Hermite interpolation on a trace produced by integrate_ode.
template <std::size_t N>
std::array<std::complex<double>, N> dense_value(const std::vector<OdeNode<N>>& trace, double s)
{
    if (trace.empty()) throw NumericalError("empty ODE trace");
    if (s <= trace.front().s) return trace.front().y;
    if (s >= trace.back().s) return trace.back().y;
    auto it = std::upper_bound(trace.begin(), trace.end(), s,
                               [](double value, const OdeNode<N>& node) { return value < node.s; });
    const auto& right = *it;
    const auto& left = *(it - 1);
    const double h = right.s - left.s;
    const double x = (s - left.s) / h;
    const double h00 = (1 + 2 * x) * (1 - x) * (1 - x);
    const double h10 = x * (1 - x) * (1 - x);
    const double h01 = x * x * (3 - 2 * x);
    const double h11 = x * x * (x - 1);
    std::array<std::complex<double>, N> out{};
    for (std::size_t i = 0; i < N; ++i)
        out[i] = h00 * left.y[i] + h10 * h * left.dy[i] + h01 * right.y[i] + h11 * h * right.dy[i];
    return out;
}

}  // namespace contagion::numerics
