#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace contagion {

/// Errors raised for invalid inputs (exit code 2 at the command line).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Errors raised when a numerical procedure cannot deliver its contract
/// (pole proximity, bracket failure, quadrature or ODE non-convergence).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class TimeUnit { quarter, year };

/// Number of quarters in one unit of `unit`.
constexpr double quarters_in(TimeUnit unit) noexcept
{
    return unit == TimeUnit::year ? 4.0 : 1.0;
}

const char* to_string(TimeUnit unit) noexcept;
TimeUnit time_unit_from_string(const std::string& name);

/// Intensity specification of one dynamic contagion process:
///
///   dλ = δ(η − λ)dt + σ dW + d(Σ Z_j),   Z_j ~ Exponential(β)
///
/// where the jumps Z_j arrive at the process's own event times.
struct ContagionParams {
    double lambda0 = 0.0;  ///< initial intensity
    double delta = 1.0;    ///< mean-reversion speed
    double eta = 0.0;      ///< mean-reversion level
    double sigma = 0.0;    ///< diffusion volatility
    double beta = 1.0;     ///< rate of the exponential jump-size law (mean jump 1/β)

    /// Long-run mean of λ, δη/(δ − 1/β). Finite only when βδ > 1.
    double stationary_mean_intensity() const noexcept
    {
        return delta * eta / (delta - 1.0 / beta);
    }

    bool operator==(const ContagionParams&) const = default;
};

/// Per-firm resistance to adverse events.
struct FirmParams {
    double d = 1.0;    ///< probability that one adverse event kills the firm
    double ell = 0.0;  ///< loading on the common event process

    double theta() const noexcept { return 1.0 - d; }
    /// Survival factor per common event, (1 − d)^ℓ, with 0⁰ = 1.
    double dtilde() const noexcept { return std::pow(1.0 - d, ell); }

    bool operator==(const FirmParams&) const = default;
};

/// Homogeneous pool of `n_firms` names. Every firm shares `firm` and the
/// law of its idiosyncratic process `idio`; `common` drives all firms.
struct PortfolioSpec {
    int n_firms = 1;
    double recovery = 0.0;
    FirmParams firm;
    ContagionParams idio;
    ContagionParams common;
};

struct TrancheSpec {
    double attach = 0.0;
    double detach = 1.0;

    double width() const noexcept { return detach - attach; }
    bool operator==(const TrancheSpec&) const = default;
};

struct PricingConfig {
    double r = 0.0;                         ///< risk-free rate, per `rate_unit`
    double horizon = 1.0;                   ///< maturity T in years
    int payments_per_year = 4;
    TimeUnit time_unit = TimeUnit::quarter; ///< unit the ContagionParams are quoted in
    TimeUnit rate_unit = TimeUnit::year;

    /// Continuously compounded rate per year.
    double annual_rate() const noexcept { return r * 4.0 / quarters_in(rate_unit); }
};

/// One violated invariant, keyed by the offending field.
struct FieldError {
    std::string field;
    std::string message;
};

class ValidationError : public ConfigError {
public:
    explicit ValidationError(std::vector<FieldError> errors);
    const std::vector<FieldError>& errors() const noexcept { return errors_; }

private:
    std::vector<FieldError> errors_;
};

/// A portfolio whose processes are expressed in the engine's internal unit
/// (quarters), together with the pricing configuration in years.
struct ValidatedModel {
    PortfolioSpec spec;
    PricingConfig cfg;

    double horizon_quarters() const noexcept { return cfg.horizon * 4.0; }
};

std::vector<FieldError> check(const ContagionParams& params, const std::string& prefix);
std::vector<FieldError> check(const FirmParams& firm, const std::string& prefix);
std::vector<FieldError> check(const PortfolioSpec& spec);
std::vector<FieldError> check(const PricingConfig& cfg);
/// Checks that `tranches` is nonempty and partitions [0, 1].
std::vector<FieldError> check(const std::vector<TrancheSpec>& tranches);

/// Checks every invariant and converts both processes to quarter units.
/// Throws ValidationError carrying the full list of violations.
ValidatedModel validate(const PortfolioSpec& spec, const PricingConfig& cfg);

/// Re-expresses `params` in another time unit. Rates (λ₀, η, δ) scale by the
/// unit ratio ρ, σ by ρ^{3/2}, β by 1/ρ; the product βδ is unchanged.
ContagionParams unit_convert(const ContagionParams& params, TimeUnit from, TimeUnit to);

/// The base case used throughout the numerical illustrations.
PortfolioSpec base_case_portfolio();
PricingConfig base_case_pricing();
std::vector<TrancheSpec> base_case_tranches();

}  // namespace contagion
