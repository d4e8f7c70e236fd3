#pragma once

#include "contagion/model.hpp"
#include "contagion/portfolio.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace contagion {

enum class ModelMode { dynamic_contagion, poisson, ajd_no_self };

const char* to_string(ModelMode mode) noexcept;
/// Accepts "dynamic", "dynamic_contagion", "poisson", "ajd_no_self".
ModelMode model_mode_from_string(const std::string& name);

/// A comparison model matched to the contagion base case so that the
/// stationary mean intensity E[λ(∞)] = δη/(δ − 1/β) is the same.
struct ComparisonModel {
    ModelMode mode = ModelMode::dynamic_contagion;
    CountingProcess idio;
    CountingProcess common;

    static ComparisonModel matched(ModelMode mode, const PortfolioSpec& spec);
};

/// Event process of `mode` matched to the contagion process `params`.
CountingProcess matched_process(ModelMode mode, const ContagionParams& params);

/// Σ_j min(max((1−w)j/N − attach, 0), width)·P(D = j).
double expected_tranche_loss(const DefaultCountDistribution& dist, const TrancheSpec& tranche,
                             double recovery);

/// The same quantity through the loss distribution function:
/// Δk − k_i·F(k_i) + k_{i−1}·F(k_{i−1}) + Σ_{L_j ∈ (k_{i−1}, k_i]} L_j·P(D = j).
double expected_tranche_loss_cdf_form(const DefaultCountDistribution& dist,
                                      const TrancheSpec& tranche, double recovery);

/// (1 − w)·E[D]/N.
double expected_portfolio_loss(const DefaultCountDistribution& dist, double recovery);

/// Evaluates E[L_i(t)] for a batch of times in years.
using LossCurve = std::function<std::vector<double>(const std::vector<double>&)>;

struct ProtectionLegResult {
    double value = 0.0;
    int subintervals_per_period = 0;
};

/// e^{−rT}·E[L(T)] + r·∫₀ᵀ e^{−rt}E[L(t)] dt by composite Simpson, starting at
/// 8 subintervals per payment period and doubling until successive estimates
/// differ by less than 1e−9.
ProtectionLegResult protection_leg(const LossCurve& curve, double annual_rate, double horizon_years,
                                   int payments_per_year);

/// Σ_j e^{−r t_j}(Δk − E[L(t_j)])Δt_j.
double premium_annuity(const std::vector<double>& expected_loss_at_payments,
                       const std::vector<double>& payment_times, double tranche_width,
                       double annual_rate);

/// V/A. Throws NumericalError when the annuity is at most 1e−12.
double spread(double protection_leg, double annuity);

/// Spread quoted in units of 100 bps (percent per year).
inline double spread_table_units(double spread_fraction) { return 100.0 * spread_fraction; }

struct TrancheQuote {
    TrancheSpec tranche;
    ModelMode mode = ModelMode::dynamic_contagion;
    double horizon_years = 0.0;
    std::vector<double> payment_times;           ///< t_j in years
    std::vector<double> expected_loss;           ///< E[L_i(t_j)]
    double protection_leg = 0.0;                 ///< V_i
    double annuity = 0.0;                        ///< A_i
    double spread = 0.0;                         ///< c_i = V_i/A_i, fraction per year
    int quadrature_subintervals = 0;

    double spread_table_units() const { return contagion::spread_table_units(spread); }
};

/// Expected tranche losses of a pool at arbitrary times (years), cached by time.
class TrancheLossSurface {
public:
    TrancheLossSurface(PoolModel pool, std::vector<TrancheSpec> tranches, double tail_tol = 1e-8,
                       int jobs = 1);

    /// Ensures every time in `times` is evaluated, in one batch.
    void prefetch(const std::vector<double>& times);
    /// Per-tranche E[L_i(t)].
    const std::vector<double>& tranche_losses(double t);
    /// E[L(t)] for the whole pool.
    double portfolio_loss(double t);
    const DefaultCountDistribution& distribution(double t);

    const std::vector<TrancheSpec>& tranches() const noexcept { return tranches_; }
    const PoolModel& pool() const noexcept { return pool_; }

private:
    struct Entry {
        DefaultCountDistribution dist;
        std::vector<double> tranche_losses;
        double portfolio_loss;
    };
    const Entry& entry(double t);

    PoolModel pool_;
    std::vector<TrancheSpec> tranches_;
    double tail_tol_;
    int jobs_;
    std::map<double, Entry> cache_;
};

struct PricingRequest {
    ModelMode mode = ModelMode::dynamic_contagion;
    double tail_tol = 1e-8;
    int jobs = 1;
};

/// Quotes for every tranche at every maturity (years), sharing one loss surface.
/// `model` must come from validate(); quotes are ordered by maturity then tranche.
std::vector<TrancheQuote> price_term_structure(const ValidatedModel& model,
                                               const std::vector<TrancheSpec>& tranches,
                                               const std::vector<double>& maturities,
                                               const PricingRequest& request = {});

std::vector<TrancheQuote> price_cdo(const ValidatedModel& model,
                                    const std::vector<TrancheSpec>& tranches,
                                    const PricingRequest& request = {});

/// Quotes under a comparison model (mode ≠ dynamic_contagion).
std::vector<TrancheQuote> comparison_spreads(ModelMode mode, const ValidatedModel& model,
                                             const std::vector<TrancheSpec>& tranches,
                                             double horizon_years, int jobs = 1);

}  // namespace contagion
