#include "contagion/simulation.hpp"

#include "contagion/parallel.hpp"
#include "contagion/philox.hpp"

#include <boost/random/normal_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace contagion {

const char* to_string(Scheme scheme) noexcept
{
    return scheme == Scheme::euler_bernoulli ? "euler_bernoulli" : "euler_poisson_step";
}

const char* to_string(FloorPolicy policy) noexcept
{
    switch (policy) {
    case FloorPolicy::none: return "none";
    case FloorPolicy::reflect_zero_rate: return "reflect_zero_rate";
    case FloorPolicy::clip_zero_rate: return "clip_zero_rate";
    }
    return "?";
}

Scheme scheme_from_string(const std::string& name)
{
    if (name == "euler_bernoulli") return Scheme::euler_bernoulli;
    if (name == "euler_poisson_step") return Scheme::euler_poisson_step;
    throw ConfigError("unknown scheme '" + name + "'");
}

FloorPolicy floor_policy_from_string(const std::string& name)
{
    if (name == "none") return FloorPolicy::none;
    if (name == "reflect_zero_rate") return FloorPolicy::reflect_zero_rate;
    if (name == "clip_zero_rate") return FloorPolicy::clip_zero_rate;
    throw ConfigError("unknown floor_policy '" + name + "'");
}

std::vector<FieldError> check(const SimConfig& cfg, const std::string& prefix)
{
    std::vector<FieldError> errors;
    if (cfg.n_paths < 1) errors.push_back({prefix + ".n_paths", "must be >= 1"});
    if (!(cfg.dt > 0.0 && cfg.dt <= 0.01)) errors.push_back({prefix + ".dt", "must lie in (0, 0.01]"});
    if (cfg.jobs < 1) errors.push_back({prefix + ".jobs", "must be >= 1"});
    return errors;
}

namespace {

constexpr std::int64_t kBlockPaths = 4096;
constexpr int kLockstep = 4;

using StandardNormal = boost::random::normal_distribution<double>;

void require_valid(const SimConfig& cfg)
{
    if (auto errors = check(cfg); !errors.empty()) throw ValidationError(std::move(errors));
}

std::int64_t step_index(double t, double dt) { return std::llround(t / dt); }

// State of one simulated path. For the Bernoulli scheme, an event fires in the
// first step whose running no-event probability prod(1 - p_k) drops below a
// uniform threshold; this is the same law as one uniform per step.
struct PathState {
    double lambda;
    double no_event = 1.0;
    double threshold = -1.0;  // < 0: draw before the next step
};

class EulerStepper {
public:
    EulerStepper(const ContagionParams& p, const SimConfig& cfg)
        : p_(p), dt_(cfg.dt), sqrt_dt_(std::sqrt(cfg.dt)), scheme_(cfg.scheme),
          policy_(cfg.floor_policy)
    {
    }

    /// Advances λ by one step and returns the number of events in it.
    unsigned step(PathState& path, PhiloxStream& rng) const
    {
        double& lambda = path.lambda;
        const double rate = std::max(lambda, 0.0) * dt_;
        lambda += p_.delta * (p_.eta - lambda) * dt_;
        if (p_.sigma != 0.0) lambda += p_.sigma * sqrt_dt_ * StandardNormal{}(rng);
        unsigned events = 0;
        if (scheme_ == Scheme::euler_bernoulli) {
            if (path.threshold < 0.0) path.threshold = rng.uniform_open();
            path.no_event *= std::max(1.0 - rate, 0.0);
            if (path.no_event < path.threshold) {
                events = 1;
                path.no_event = 1.0;
                path.threshold = -1.0;
            }
        } else if (rate > 0.0) {
            events = boost::random::poisson_distribution<unsigned, double>(rate)(rng);
        }
        for (unsigned e = 0; e < events; ++e) lambda -= std::log(rng.uniform_open()) / p_.beta;
        if (policy_ == FloorPolicy::reflect_zero_rate) lambda = std::abs(lambda);
        if (policy_ == FloorPolicy::clip_zero_rate) lambda = std::max(lambda, 0.0);
        return events;
    }

    double dt() const noexcept { return dt_; }

private:
    ContagionParams p_;
    double dt_;
    double sqrt_dt_;
    Scheme scheme_;
    FloorPolicy policy_;
};

template <class Fn>
void for_each_block(std::int64_t n_paths, int jobs, Fn&& fn)
{
    const std::int64_t blocks = (n_paths + kBlockPaths - 1) / kBlockPaths;
    parallel_for(static_cast<std::size_t>(blocks), jobs, [&](std::size_t b) {
        const std::int64_t begin = static_cast<std::int64_t>(b) * kBlockPaths;
        fn(begin, std::min(n_paths, begin + kBlockPaths));
    });
}

template <class Fn>
void for_each_path(std::int64_t n_paths, int jobs, Fn&& fn)
{
    for_each_block(n_paths, jobs, [&](std::int64_t begin, std::int64_t end) {
        for (std::int64_t path = begin; path < end; ++path) fn(path);
    });
}

Estimate sample_estimate(const std::vector<double>& x)
{
    const double n = static_cast<double>(x.size());
    double sum = 0.0;
    for (double v : x) sum += v;
    const double mean = sum / n;
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    const double var = x.size() > 1 ? ss / (n - 1.0) : 0.0;
    return {mean, std::sqrt(var / n)};
}

Histogram histogram_from(const std::vector<std::uint32_t>& values, double horizon)
{
    Histogram h;
    h.horizon = horizon;
    h.n_paths = static_cast<std::int64_t>(values.size());
    const std::uint32_t top = values.empty() ? 0 : *std::max_element(values.begin(), values.end());
    std::vector<std::int64_t> tally(top + 1, 0);
    for (auto v : values) ++tally[v];
    const double n = static_cast<double>(values.size());
    for (auto c : tally) {
        const double p = static_cast<double>(c) / n;
        h.probability.push_back({p, std::sqrt(p * (1.0 - p) / n)});
    }
    return h;
}

// Event step indices (1-based step at whose end the event fired) of one path,
// stopping after `stop_after` events or `n_steps` steps.
std::vector<std::int64_t> event_steps(const EulerStepper& stepper, double lambda0,
                                      std::int64_t n_steps, PhiloxStream& rng,
                                      std::size_t stop_after)
{
    std::vector<std::int64_t> steps;
    PathState path{lambda0};
    for (std::int64_t k = 1; k <= n_steps && steps.size() < stop_after; ++k) {
        const unsigned events = stepper.step(path, rng);
        for (unsigned e = 0; e < events; ++e) steps.push_back(k);
    }
    return steps;
}

// Number of events survived before the killing one when each kills with
// probability 1 − survive; the kill is event number K = 1 + that count.
std::size_t kill_index(double survive, PhiloxStream& rng)
{
    if (survive >= 1.0) return std::numeric_limits<std::size_t>::max();
    if (survive <= 0.0) return 1;
    const double k = std::floor(std::log(rng.uniform_open()) / std::log(survive));
    if (k >= 1e15) return std::numeric_limits<std::size_t>::max();
    return 1 + static_cast<std::size_t>(k);
}

}  // namespace

std::vector<PathRecord> simulate_paths(const ContagionParams& params, double horizon,
                                       const SimConfig& cfg, std::int64_t first_path,
                                       std::int64_t count, bool keep_intensity)
{
    require_valid(cfg);
    const EulerStepper stepper(params, cfg);
    const std::int64_t n_steps = step_index(horizon, cfg.dt);
    std::vector<PathRecord> out(static_cast<std::size_t>(count));
    for_each_path(count, cfg.jobs, [&](std::int64_t i) {
        PhiloxStream rng(cfg.seed, static_cast<std::uint64_t>(first_path + i));
        auto& rec = out[static_cast<std::size_t>(i)];
        PathState path{params.lambda0};
        if (keep_intensity) rec.intensity.reserve(static_cast<std::size_t>(n_steps));
        for (std::int64_t k = 1; k <= n_steps; ++k) {
            const unsigned events = stepper.step(path, rng);
            for (unsigned e = 0; e < events; ++e) rec.event_times.push_back(k * cfg.dt);
            if (keep_intensity) rec.intensity.push_back(path.lambda);
        }
        rec.terminal_intensity = path.lambda;
    });
    return out;
}

SnapshotSample simulate_snapshots(const ContagionParams& params, const std::vector<double>& times,
                                  const SimConfig& cfg)
{
    require_valid(cfg);
    if (times.empty()) throw ConfigError("simulate_snapshots: no observation times");
    std::vector<std::int64_t> obs;
    for (double t : times) {
        if (!(t >= 0.0)) throw ConfigError("simulate_snapshots: negative observation time");
        obs.push_back(step_index(t, cfg.dt));
    }
    if (!std::is_sorted(obs.begin(), obs.end()))
        throw ConfigError("simulate_snapshots: observation times must be increasing");

    SnapshotSample s;
    s.times = times;
    s.n_paths = cfg.n_paths;
    const std::size_t cells = static_cast<std::size_t>(cfg.n_paths) * times.size();
    s.counts.assign(cells, 0);
    s.intensity.assign(cells, 0.0);
    s.integrated_intensity.assign(cells, 0.0);

    const EulerStepper stepper(params, cfg);
    for_each_block(cfg.n_paths, cfg.jobs, [&](std::int64_t begin, std::int64_t end) {
        // Independent paths advance in lockstep so their update chains overlap.
        for (std::int64_t first = begin; first < end; first += kLockstep) {
            const int lanes = static_cast<int>(std::min<std::int64_t>(kLockstep, end - first));
            std::array<PhiloxStream, kLockstep> rng{
                PhiloxStream(cfg.seed, static_cast<std::uint64_t>(first)),
                PhiloxStream(cfg.seed, static_cast<std::uint64_t>(first + 1)),
                PhiloxStream(cfg.seed, static_cast<std::uint64_t>(first + 2)),
                PhiloxStream(cfg.seed, static_cast<std::uint64_t>(first + 3))};
            std::array<PathState, kLockstep> path;
            path.fill(PathState{params.lambda0});
            std::array<double, kLockstep> area{};
            std::array<std::uint32_t, kLockstep> n{};
            std::int64_t k = 0;
            for (std::size_t o = 0; o < obs.size(); ++o) {
                for (; k < obs[o]; ++k) {
                    for (int l = 0; l < kLockstep; ++l) {
                        area[l] += path[l].lambda * cfg.dt;
                        n[l] += stepper.step(path[l], rng[l]);
                    }
                }
                for (int l = 0; l < lanes; ++l) {
                    const std::size_t cell = static_cast<std::size_t>(first + l) * times.size() + o;
                    s.counts[cell] = n[l];
                    s.intensity[cell] = path[l].lambda;
                    s.integrated_intensity[cell] = area[l];
                }
            }
        }
    });
    return s;
}

Estimate transform_estimate(const SnapshotSample& sample, std::size_t k, double theta, double v)
{
    std::vector<double> x(static_cast<std::size_t>(sample.n_paths));
    for (std::int64_t p = 0; p < sample.n_paths; ++p)
        x[static_cast<std::size_t>(p)] =
            std::pow(theta, sample.count(p, k)) * std::exp(-v * sample.lambda(p, k));
    return sample_estimate(x);
}

Estimate time_average_intensity(const SnapshotSample& sample, std::size_t k)
{
    const double t = sample.times.at(k);
    if (!(t > 0.0)) throw ConfigError("time_average_intensity: horizon must be > 0");
    std::vector<double> x(static_cast<std::size_t>(sample.n_paths));
    for (std::int64_t p = 0; p < sample.n_paths; ++p)
        x[static_cast<std::size_t>(p)] =
            sample.integrated_intensity[static_cast<std::size_t>(p) * sample.times.size() + k] / t;
    return sample_estimate(x);
}

Histogram count_histogram(const SnapshotSample& sample, std::size_t k)
{
    std::vector<std::uint32_t> values(static_cast<std::size_t>(sample.n_paths));
    for (std::int64_t p = 0; p < sample.n_paths; ++p)
        values[static_cast<std::size_t>(p)] = sample.count(p, k);
    return histogram_from(values, sample.times.at(k));
}

Estimate estimate_transform(const ContagionParams& params, double theta, double v, double horizon,
                            const SimConfig& cfg)
{
    if (!(theta >= 0.0 && theta <= 1.0)) throw ConfigError("estimate_transform: θ must lie in [0, 1]");
    if (!(v >= 0.0)) throw ConfigError("estimate_transform: v must be >= 0");
    if (theta == 1.0 && v == 0.0) return {1.0, 0.0};
    return transform_estimate(simulate_snapshots(params, {horizon}, cfg), 0, theta, v);
}

Histogram estimate_count_distribution(const ContagionParams& params, double horizon,
                                      const SimConfig& cfg)
{
    return count_histogram(simulate_snapshots(params, {horizon}, cfg), 0);
}

std::vector<double> simulate_default_times(const PortfolioSpec& spec, double horizon,
                                           const SimConfig& cfg, std::int64_t path)
{
    const double inf = std::numeric_limits<double>::infinity();
    const std::int64_t n_steps = step_index(horizon, cfg.dt);
    const EulerStepper common_stepper(spec.common, cfg);
    const EulerStepper idio_stepper(spec.idio, cfg);
    const auto p = static_cast<std::uint64_t>(path);

    PhiloxStream common_rng(cfg.seed, stream_id(p, 0));
    const auto common = event_steps(common_stepper, spec.common.lambda0, n_steps, common_rng,
                                    std::numeric_limits<std::size_t>::max());

    std::vector<double> tau(static_cast<std::size_t>(spec.n_firms), inf);
    for (int i = 0; i < spec.n_firms; ++i) {
        PhiloxStream rng(cfg.seed, stream_id(p, 1 + static_cast<std::uint64_t>(i)));
        std::int64_t death = n_steps + 1;
        const std::size_t k_common = kill_index(spec.firm.dtilde(), rng);
        if (k_common <= common.size()) death = common[k_common - 1];
        const std::size_t k_idio = kill_index(1.0 - spec.firm.d, rng);
        const auto idio = event_steps(idio_stepper, spec.idio.lambda0, std::min(death - 1, n_steps),
                                      rng, k_idio);
        if (k_idio <= idio.size()) death = std::min(death, idio[k_idio - 1]);
        if (death <= n_steps) tau[static_cast<std::size_t>(i)] = static_cast<double>(death) * cfg.dt;
    }
    return tau;
}

std::vector<Histogram> estimate_portfolio_distribution(const PortfolioSpec& spec,
                                                       const std::vector<double>& horizons,
                                                       const SimConfig& cfg)
{
    require_valid(cfg);
    if (horizons.empty()) throw ConfigError("estimate_portfolio_distribution: no horizons");
    const double longest = *std::max_element(horizons.begin(), horizons.end());
    const std::size_t h_count = horizons.size();
    std::vector<std::uint32_t> defaults(static_cast<std::size_t>(cfg.n_paths) * h_count, 0);
    for_each_path(cfg.n_paths, cfg.jobs, [&](std::int64_t path) {
        const auto tau = simulate_default_times(spec, longest, cfg, path);
        for (std::size_t h = 0; h < h_count; ++h) {
            const double cutoff = (static_cast<double>(step_index(horizons[h], cfg.dt)) + 0.5) * cfg.dt;
            std::uint32_t n = 0;
            for (double t : tau) n += t <= cutoff ? 1u : 0u;
            defaults[static_cast<std::size_t>(path) * h_count + h] = n;
        }
    });
    std::vector<Histogram> out;
    for (std::size_t h = 0; h < h_count; ++h) {
        std::vector<std::uint32_t> values(static_cast<std::size_t>(cfg.n_paths));
        for (std::int64_t p = 0; p < cfg.n_paths; ++p)
            values[static_cast<std::size_t>(p)] = defaults[static_cast<std::size_t>(p) * h_count + h];
        out.push_back(histogram_from(values, horizons[h]));
    }
    return out;
}

std::vector<TrancheLegEstimate> estimate_tranche_legs(const ValidatedModel& model,
                                                      const std::vector<TrancheSpec>& tranches,
                                                      const SimConfig& cfg)
{
    require_valid(cfg);
    if (auto errors = check(tranches); !errors.empty()) throw ValidationError(std::move(errors));
    const auto& spec = model.spec;
    const double r = model.cfg.annual_rate();
    const int ppy = model.cfg.payments_per_year;
    const int periods = static_cast<int>(std::lround(model.cfg.horizon * ppy));
    const double horizon_q = model.horizon_quarters();
    const std::size_t n_tr = tranches.size();
    const std::size_t per_path = n_tr * (1 + static_cast<std::size_t>(periods));

    // Per path and tranche: discounted leg, then L_i(t_j) for each payment date.
    std::vector<double> samples(static_cast<std::size_t>(cfg.n_paths) * per_path, 0.0);
    for_each_path(cfg.n_paths, cfg.jobs, [&](std::int64_t path) {
        auto tau = simulate_default_times(spec, horizon_q, cfg, path);
        std::sort(tau.begin(), tau.end());
        double* out = samples.data() + static_cast<std::size_t>(path) * per_path;
        for (std::size_t i = 0; i < n_tr; ++i) {
            const auto& tr = tranches[i];
            auto layer = [&](std::size_t m) {
                const double loss = (1.0 - spec.recovery) * static_cast<double>(m) / spec.n_firms;
                return std::clamp(loss - tr.attach, 0.0, tr.width());
            };
            double leg = 0.0;
            for (std::size_t m = 0; m < tau.size() && std::isfinite(tau[m]); ++m)
                leg += std::exp(-r * tau[m] / 4.0) * (layer(m + 1) - layer(m));
            out[i * (1 + periods)] = leg;
            for (int j = 1; j <= periods; ++j) {
                const double cutoff = 4.0 * j / ppy + 0.5 * cfg.dt;
                const auto m = static_cast<std::size_t>(
                    std::upper_bound(tau.begin(), tau.end(), cutoff) - tau.begin());
                out[i * (1 + periods) + j] = layer(m);
            }
        }
    });

    std::vector<TrancheLegEstimate> result(n_tr);
    std::vector<double> column(static_cast<std::size_t>(cfg.n_paths));
    auto collect = [&](std::size_t offset) {
        for (std::int64_t p = 0; p < cfg.n_paths; ++p)
            column[static_cast<std::size_t>(p)] =
                samples[static_cast<std::size_t>(p) * per_path + offset];
        return sample_estimate(column);
    };
    for (std::size_t i = 0; i < n_tr; ++i) {
        result[i].tranche = tranches[i];
        result[i].protection_leg = collect(i * (1 + periods));
        for (int j = 1; j <= periods; ++j)
            result[i].expected_loss.push_back(collect(i * (1 + periods) + j));
    }
    return result;
}

}  // namespace contagion
