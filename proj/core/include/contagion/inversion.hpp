#pragma once

#include "contagion/process.hpp"

#include <vector>

namespace contagion {

/// P(N(t) = n), n = 0..n_max, recovered from the PGF.
struct CountDistribution {
    double horizon = 0.0;
    std::vector<double> pmf;
    double captured_mass = 0.0;      ///< Σ pmf
    double max_imag_residue = 0.0;   ///< largest |Im p_n| before discarding
    int fft_size = 0;                ///< K, number of points on the unit circle

    double mean() const;
};

struct InversionOptions {
    int n_max = 64;            ///< initial truncation; doubled until the tail is captured
    int n_max_cap = 4096;
    double tail_tol = 1e-8;
    int jobs = 1;
    TransformOptions transform{};
};

/// Smallest power of two ≥ max(64, 4·n_max).
int inversion_points(int n_max);

/// Discrete Fourier inversion on the unit circle,
///
///   p_n = (1/K) Σ_k G(e^{2πik/K}) e^{−2πikn/K},
///
/// with G evaluated by the ODE route at complex θ. n_max is doubled until
/// Σ p_n ≥ 1 − tail_tol at every horizon; NumericalError past n_max_cap or if
/// any imaginary residue exceeds 1e−9.
std::vector<CountDistribution> count_distributions(const CountingProcess& process,
                                                   const std::vector<double>& horizons,
                                                   const InversionOptions& opts = {});

CountDistribution count_distribution(const ContagionParams& params, double horizon, int n_max,
                                     double tail_tol, int jobs = 1);

}  // namespace contagion
