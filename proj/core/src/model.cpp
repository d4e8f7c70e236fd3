#include "contagion/model.hpp"

#include <sstream>

namespace contagion {

const char* to_string(TimeUnit unit) noexcept
{
    return unit == TimeUnit::year ? "year" : "quarter";
}

TimeUnit time_unit_from_string(const std::string& name)
{
    if (name == "quarter") return TimeUnit::quarter;
    if (name == "year") return TimeUnit::year;
    throw ConfigError("unknown time unit '" + name + "' (expected quarter|year)");
}

namespace {

std::string join_errors(const std::vector<FieldError>& errors)
{
    std::ostringstream out;
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (i) out << "; ";
        out << errors[i].field << ": " << errors[i].message;
    }
    return out.str();
}

std::string fmt(double x)
{
    std::ostringstream out;
    out.precision(10);
    out << x;
    return out.str();
}

}  // namespace

ValidationError::ValidationError(std::vector<FieldError> errors)
    : ConfigError(join_errors(errors)), errors_(std::move(errors))
{
}

std::vector<FieldError> check(const ContagionParams& p, const std::string& prefix)
{
    std::vector<FieldError> errors;
    auto require = [&](bool ok, const char* field, std::string message) {
        if (!ok) errors.push_back({prefix + field, std::move(message)});
    };
    require(std::isfinite(p.lambda0) && p.lambda0 >= 0, "lambda0", "must be >= 0");
    require(std::isfinite(p.eta) && p.eta >= 0, "eta", "must be >= 0");
    require(std::isfinite(p.sigma) && p.sigma >= 0, "sigma", "must be >= 0");
    require(std::isfinite(p.delta) && p.delta > 0, "delta", "must be > 0");
    require(std::isfinite(p.beta) && p.beta > 0, "beta", "must be > 0");
    if (p.delta > 0 && p.beta > 0 && !(p.beta * p.delta > 1.0)) {
        errors.push_back({prefix + "beta",
                          "stationarity condition violated: beta*delta=" + fmt(p.beta * p.delta) +
                              " <= 1"});
    }
    return errors;
}

std::vector<FieldError> check(const FirmParams& firm, const std::string& prefix)
{
    std::vector<FieldError> errors;
    if (!(firm.d > 0.0 && firm.d <= 1.0)) errors.push_back({prefix + "d", "must lie in (0, 1]"});
    if (!(std::isfinite(firm.ell) && firm.ell >= 0.0))
        errors.push_back({prefix + "ell", "must be >= 0"});
    return errors;
}

std::vector<FieldError> check(const PortfolioSpec& spec)
{
    std::vector<FieldError> errors;
    if (spec.n_firms < 1) errors.push_back({"n_firms", "must be >= 1"});
    if (!(spec.recovery >= 0.0 && spec.recovery < 1.0))
        errors.push_back({"recovery", "must lie in [0, 1)"});
    for (auto&& group : {check(spec.firm, "firm."), check(spec.idio, "idio."),
                         check(spec.common, "common.")}) {
        errors.insert(errors.end(), group.begin(), group.end());
    }
    return errors;
}

std::vector<FieldError> check(const PricingConfig& cfg)
{
    std::vector<FieldError> errors;
    if (!(std::isfinite(cfg.r) && cfg.r >= 0)) errors.push_back({"r", "must be >= 0"});
    if (!(std::isfinite(cfg.horizon) && cfg.horizon > 0))
        errors.push_back({"horizon", "must be > 0"});
    if (cfg.payments_per_year < 1) {
        errors.push_back({"payments_per_year", "must be >= 1"});
    } else if (cfg.horizon > 0) {
        double periods = cfg.horizon * cfg.payments_per_year;
        if (std::abs(periods - std::round(periods)) > 1e-9)
            errors.push_back({"horizon", "must be a whole number of payment periods"});
    }
    return errors;
}

std::vector<FieldError> check(const std::vector<TrancheSpec>& tranches)
{
    std::vector<FieldError> errors;
    if (tranches.empty()) {
        errors.push_back({"tranches", "at least one tranche is required"});
        return errors;
    }
    for (std::size_t i = 0; i < tranches.size(); ++i) {
        const auto& t = tranches[i];
        std::string key = "tranches[" + std::to_string(i) + "]";
        if (!(t.attach >= 0.0 && t.attach < t.detach && t.detach <= 1.0))
            errors.push_back({key, "need 0 <= attach < detach <= 1"});
        if (i > 0 && tranches[i - 1].detach != t.attach)
            errors.push_back({key, "attach must equal the previous detach"});
    }
    if (tranches.front().attach != 0.0)
        errors.push_back({"tranches[0]", "first attachment must be 0"});
    if (tranches.back().detach != 1.0)
        errors.push_back({"tranches[" + std::to_string(tranches.size() - 1) + "]",
                          "last detachment must be 1"});
    return errors;
}

ValidatedModel validate(const PortfolioSpec& spec, const PricingConfig& cfg)
{
    auto errors = check(spec);
    auto cfg_errors = check(cfg);
    errors.insert(errors.end(), cfg_errors.begin(), cfg_errors.end());
    if (!errors.empty()) throw ValidationError(std::move(errors));

    ValidatedModel model{spec, cfg};
    model.spec.idio = unit_convert(spec.idio, cfg.time_unit, TimeUnit::quarter);
    model.spec.common = unit_convert(spec.common, cfg.time_unit, TimeUnit::quarter);
    return model;
}

ContagionParams unit_convert(const ContagionParams& p, TimeUnit from, TimeUnit to)
{
    if (from == to) return p;
    const double rho = quarters_in(to) / quarters_in(from);
    ContagionParams out = p;
    out.lambda0 = p.lambda0 * rho;
    out.eta = p.eta * rho;
    out.delta = p.delta * rho;
    out.sigma = p.sigma * rho * std::sqrt(rho);
    out.beta = p.beta / rho;
    return out;
}

PortfolioSpec base_case_portfolio()
{
    ContagionParams process{.lambda0 = 1.5, .delta = 2.0, .eta = 1.5, .sigma = 0.4, .beta = 1.5};
    return PortfolioSpec{
        .n_firms = 50,
        .recovery = 0.4,
        .firm = FirmParams{.d = 1.0 - 0.97, .ell = 0.5},
        .idio = process,
        .common = process,
    };
}

PricingConfig base_case_pricing()
{
    return PricingConfig{.r = 0.03,
                         .horizon = 3.0,
                         .payments_per_year = 4,
                         .time_unit = TimeUnit::quarter,
                         .rate_unit = TimeUnit::year};
}

std::vector<TrancheSpec> base_case_tranches()
{
    return {{0.0, 0.07}, {0.07, 0.12}, {0.12, 1.0}};
}

}  // namespace contagion
