#pragma once

#include "contagion/cdo.hpp"
#include "contagion/model.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace contagion {

enum class Scheme { euler_bernoulli, euler_poisson_step };

/// Handling of negative intensity. The event rate is always max(λ, 0).
/// `none` leaves λ unclipped, `reflect_zero_rate` sets λ ← |λ|,
/// `clip_zero_rate` sets λ ← max(λ, 0).
enum class FloorPolicy { none, reflect_zero_rate, clip_zero_rate };

const char* to_string(Scheme scheme) noexcept;
const char* to_string(FloorPolicy policy) noexcept;
Scheme scheme_from_string(const std::string& name);
FloorPolicy floor_policy_from_string(const std::string& name);

struct SimConfig {
    std::int64_t n_paths = 100000;
    double dt = 1e-3;  ///< Euler step, in the process's time unit
    std::uint64_t seed = 20240101;
    Scheme scheme = Scheme::euler_bernoulli;
    FloorPolicy floor_policy = FloorPolicy::none;
    int jobs = 1;
};

std::vector<FieldError> check(const SimConfig& cfg, const std::string& prefix = "simulation");

/// Role numbers within one portfolio path's RNG streams:
/// stream = path·2¹⁶ + role, role 0 the common process, role 1 + i firm i.
constexpr std::uint64_t stream_id(std::uint64_t path, std::uint64_t role) noexcept
{
    return (path << 16) + role;
}

struct PathRecord {
    std::vector<double> event_times;  ///< end of the step in which each event fired
    double terminal_intensity = 0.0;
    std::vector<double> intensity;    ///< λ after each step, when requested
};

/// Paths [first_path, first_path + count) of the Euler scheme on [0, horizon].
std::vector<PathRecord> simulate_paths(const ContagionParams& params, double horizon,
                                       const SimConfig& cfg, std::int64_t first_path = 0,
                                       std::int64_t count = 1, bool keep_intensity = false);

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
};

/// N(t), λ(t) and ∫₀ᵗ λ ds at each observation time for every path. Observation
/// k is taken after step round(t_k/dt).
struct SnapshotSample {
    std::vector<double> times;
    std::int64_t n_paths = 0;
    std::vector<std::uint32_t> counts;        ///< [path·times + k]
    std::vector<double> intensity;            ///< [path·times + k]
    std::vector<double> integrated_intensity; ///< [path·times + k]

    std::uint32_t count(std::int64_t path, std::size_t k) const
    {
        return counts[static_cast<std::size_t>(path) * times.size() + k];
    }
    double lambda(std::int64_t path, std::size_t k) const
    {
        return intensity[static_cast<std::size_t>(path) * times.size() + k];
    }
};

SnapshotSample simulate_snapshots(const ContagionParams& params, const std::vector<double>& times,
                                  const SimConfig& cfg);

/// Sample mean of θ^{N(t_k)}·e^{−vλ(t_k)}.
Estimate transform_estimate(const SnapshotSample& sample, std::size_t k, double theta, double v);
/// Sample mean of (1/t_k)∫₀^{t_k} λ ds.
Estimate time_average_intensity(const SnapshotSample& sample, std::size_t k);

struct Histogram {
    double horizon = 0.0;
    std::vector<Estimate> probability;  ///< P(X = j) with binomial standard errors
    std::int64_t n_paths = 0;
};

Histogram count_histogram(const SnapshotSample& sample, std::size_t k);

Estimate estimate_transform(const ContagionParams& params, double theta, double v, double horizon,
                            const SimConfig& cfg);

Histogram estimate_count_distribution(const ContagionParams& params, double horizon,
                                      const SimConfig& cfg);

/// Default times of every firm in one simulated portfolio path, in the
/// processes' time unit; +∞ for survivors.
std::vector<double> simulate_default_times(const PortfolioSpec& spec, double horizon,
                                           const SimConfig& cfg, std::int64_t path);

/// Histogram of D(t) at each horizon (processes and horizons in quarters).
std::vector<Histogram> estimate_portfolio_distribution(const PortfolioSpec& spec,
                                                       const std::vector<double>& horizons,
                                                       const SimConfig& cfg);

struct TrancheLegEstimate {
    TrancheSpec tranche;
    Estimate protection_leg;               ///< E[Σ e^{−rτ}ΔL_i(τ)]
    std::vector<Estimate> expected_loss;   ///< E[L_i(t_j)] at the payment dates
};

/// Monte Carlo legs for a validated model (processes in quarters, times in years).
std::vector<TrancheLegEstimate> estimate_tranche_legs(const ValidatedModel& model,
                                                      const std::vector<TrancheSpec>& tranches,
                                                      const SimConfig& cfg);

}  // namespace contagion
