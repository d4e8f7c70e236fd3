#include "contagion/inversion.hpp"

#include "contagion/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

namespace contagion {

double CountDistribution::mean() const
{
    double m = 0.0;
    for (std::size_t n = 0; n < pmf.size(); ++n) m += static_cast<double>(n) * pmf[n];
    return m;
}

int inversion_points(int n_max)
{
    int k = 64;
    while (k < 4 * n_max) k *= 2;
    return k;
}

namespace {

constexpr double kMaxImagResidue = 1e-9;

std::vector<CountDistribution> invert_once(const CountingProcess& process,
                                           const std::vector<double>& horizons, int n_max,
                                           const InversionOptions& opts)
{
    const int k_points = inversion_points(n_max);
    std::vector<std::vector<complex>> values(k_points);
    parallel_for(k_points, opts.jobs, [&](std::size_t k) {
        const complex theta =
            std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / k_points);
        values[k] = pgf_curve(process, k == 0 ? complex(1.0) : theta, horizons, opts.transform);
    });

    std::vector<complex> twiddle(k_points);
    for (int m = 0; m < k_points; ++m)
        twiddle[m] = std::polar(1.0, -2.0 * std::numbers::pi * m / k_points);

    std::vector<CountDistribution> out(horizons.size());
    for (std::size_t h = 0; h < horizons.size(); ++h) {
        auto& dist = out[h];
        dist.horizon = horizons[h];
        dist.fft_size = k_points;
        dist.pmf.resize(n_max + 1);
        for (int n = 0; n <= n_max; ++n) {
            complex sum = 0.0;
            for (int k = 0; k < k_points; ++k) {
                sum += values[k][h] * twiddle[(static_cast<long>(k) * n) % k_points];
            }
            sum /= static_cast<double>(k_points);
            dist.max_imag_residue = std::max(dist.max_imag_residue, std::abs(sum.imag()));
            dist.pmf[n] = std::clamp(sum.real(), 0.0, 1.0);
        }
        double mass = 0.0;
        for (double p : dist.pmf) mass += p;
        dist.captured_mass = mass;
    }
    return out;
}

}  // namespace

std::vector<CountDistribution> count_distributions(const CountingProcess& process,
                                                   const std::vector<double>& horizons,
                                                   const InversionOptions& opts)
{
    if (opts.n_max < 0) throw ConfigError("n_max must be >= 0");
    if (!(opts.tail_tol > 0.0)) throw ConfigError("tail_tol must be > 0");
    int n_max = opts.n_max;
    while (true) {
        auto out = invert_once(process, horizons, n_max, opts);
        bool captured = true;
        for (const auto& dist : out) {
            if (dist.max_imag_residue > kMaxImagResidue) {
                throw NumericalError("PGF inversion left an imaginary residue of " +
                                     std::to_string(dist.max_imag_residue) + " at t=" +
                                     std::to_string(dist.horizon));
            }
            captured = captured && dist.captured_mass >= 1.0 - opts.tail_tol;
        }
        if (captured) return out;
        if (n_max >= opts.n_max_cap) {
            std::ostringstream msg;
            msg << "count distribution did not capture 1 - " << opts.tail_tol
                << " of the mass with n_max=" << n_max;
            throw NumericalError(msg.str());
        }
        n_max = std::min(std::max(2 * n_max, 16), opts.n_max_cap);
    }
}

CountDistribution count_distribution(const ContagionParams& params, double horizon, int n_max,
                                     double tail_tol, int jobs)
{
    InversionOptions opts;
    opts.n_max = n_max;
    opts.tail_tol = tail_tol;
    opts.jobs = jobs;
    return count_distributions(params, {horizon}, opts).front();
}

}  // namespace contagion
