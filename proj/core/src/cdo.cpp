#include "contagion/cdo.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace contagion {

const char* to_string(ModelMode mode) noexcept
{
    switch (mode) {
    case ModelMode::dynamic_contagion: return "dynamic";
    case ModelMode::poisson: return "poisson";
    case ModelMode::ajd_no_self: return "ajd_no_self";
    }
    return "?";
}

ModelMode model_mode_from_string(const std::string& name)
{
    if (name == "dynamic" || name == "dynamic_contagion") return ModelMode::dynamic_contagion;
    if (name == "poisson") return ModelMode::poisson;
    if (name == "ajd_no_self" || name == "ajd") return ModelMode::ajd_no_self;
    throw ConfigError("unknown mode '" + name + "' (expected dynamic, poisson or ajd_no_self)");
}

CountingProcess matched_process(ModelMode mode, const ContagionParams& params)
{
    const double mean = params.stationary_mean_intensity();
    switch (mode) {
    case ModelMode::dynamic_contagion: return params;
    case ModelMode::poisson: return PoissonProcess{mean};
    case ModelMode::ajd_no_self:
        return AffineNoSelfProcess{params,
                                   std::max(0.0, params.delta * params.beta * (mean - params.eta))};
    }
    throw ConfigError("unknown model mode");
}

ComparisonModel ComparisonModel::matched(ModelMode mode, const PortfolioSpec& spec)
{
    return ComparisonModel{mode, matched_process(mode, spec.idio), matched_process(mode, spec.common)};
}

namespace {

double loss_fraction(std::size_t j, std::size_t n_firms, double recovery)
{
    return (1.0 - recovery) * static_cast<double>(j) / static_cast<double>(n_firms);
}

}  // namespace

double expected_tranche_loss(const DefaultCountDistribution& dist, const TrancheSpec& tranche,
                             double recovery)
{
    const std::size_t n_firms = dist.pmf.size() - 1;
    if (n_firms == 0) return 0.0;
    double total = 0.0;
    for (std::size_t j = 0; j < dist.pmf.size(); ++j) {
        const double layer =
            std::clamp(loss_fraction(j, n_firms, recovery) - tranche.attach, 0.0, tranche.width());
        total += layer * dist.pmf[j];
    }
    return total;
}

double expected_tranche_loss_cdf_form(const DefaultCountDistribution& dist,
                                      const TrancheSpec& tranche, double recovery)
{
    const std::size_t n_firms = dist.pmf.size() - 1;
    if (n_firms == 0) return 0.0;
    double cdf_attach = 0.0;
    double cdf_detach = 0.0;
    double inside = 0.0;
    for (std::size_t j = 0; j < dist.pmf.size(); ++j) {
        const double loss = loss_fraction(j, n_firms, recovery);
        if (loss <= tranche.attach) cdf_attach += dist.pmf[j];
        if (loss <= tranche.detach) cdf_detach += dist.pmf[j];
        if (loss > tranche.attach && loss <= tranche.detach) inside += loss * dist.pmf[j];
    }
    double mass = 0.0;
    for (double p : dist.pmf) mass += p;
    return tranche.width() * mass - tranche.detach * cdf_detach + tranche.attach * cdf_attach +
           inside;
}

double expected_portfolio_loss(const DefaultCountDistribution& dist, double recovery)
{
    const std::size_t n_firms = dist.pmf.size() - 1;
    if (n_firms == 0) return 0.0;
    return (1.0 - recovery) * dist.mean() / static_cast<double>(n_firms);
}

namespace {

constexpr int kInitialSubintervals = 8;
constexpr int kMaxSubintervals = 1 << 12;
constexpr double kLegTolerance = 1e-9;
constexpr double kDeadAnnuity = 1e-12;

int whole_periods(double horizon_years, int payments_per_year)
{
    const double periods = horizon_years * payments_per_year;
    const long rounded = std::lround(periods);
    if (rounded < 1 || std::abs(periods - static_cast<double>(rounded)) > 1e-9)
        throw ConfigError("maturity " + std::to_string(horizon_years) +
                          "y is not a whole number of payment periods");
    return static_cast<int>(rounded);
}

std::vector<double> grid_times(int periods, int payments_per_year, int per_period)
{
    const int points = periods * per_period;
    const double denom = static_cast<double>(payments_per_year) * per_period;
    std::vector<double> t(points + 1);
    for (int i = 0; i <= points; ++i) t[i] = static_cast<double>(i) / denom;
    return t;
}

double simpson_leg(const std::vector<double>& times, const std::vector<double>& loss, double r)
{
    const std::size_t m = times.size() - 1;
    const double h = times.back() / static_cast<double>(m);
    double sum = 0.0;
    for (std::size_t i = 0; i <= m; ++i) {
        const double w = (i == 0 || i == m) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        sum += w * std::exp(-r * times[i]) * loss[i];
    }
    return std::exp(-r * times.back()) * loss.back() + r * sum * h / 3.0;
}

}  // namespace

ProtectionLegResult protection_leg(const LossCurve& curve, double annual_rate, double horizon_years,
                                   int payments_per_year)
{
    if (!(annual_rate >= 0.0)) throw ConfigError("protection_leg: r must be >= 0");
    if (payments_per_year < 1) throw ConfigError("protection_leg: payments_per_year must be >= 1");
    const int periods = whole_periods(horizon_years, payments_per_year);
    if (annual_rate == 0.0) {
        return {curve({static_cast<double>(periods) / payments_per_year}).front(), 0};
    }
    double previous = 0.0;
    for (int n = kInitialSubintervals; n <= kMaxSubintervals; n *= 2) {
        const auto times = grid_times(periods, payments_per_year, n);
        const double value = simpson_leg(times, curve(times), annual_rate);
        if (n > kInitialSubintervals && std::abs(value - previous) < kLegTolerance)
            return {value, n};
        previous = value;
    }
    throw NumericalError("protection leg quadrature did not converge to 1e-9");
}

double premium_annuity(const std::vector<double>& expected_loss_at_payments,
                       const std::vector<double>& payment_times, double tranche_width,
                       double annual_rate)
{
    if (expected_loss_at_payments.size() != payment_times.size())
        throw ConfigError("premium_annuity: size mismatch");
    double annuity = 0.0;
    double previous = 0.0;
    for (std::size_t j = 0; j < payment_times.size(); ++j) {
        const double dt = payment_times[j] - previous;
        annuity += std::exp(-annual_rate * payment_times[j]) *
                   (tranche_width - expected_loss_at_payments[j]) * dt;
        previous = payment_times[j];
    }
    return annuity;
}

double spread(double protection_leg, double annuity)
{
    if (!(annuity > kDeadAnnuity)) {
        std::ostringstream msg;
        msg << "dead tranche: premium annuity " << annuity << " is not above " << kDeadAnnuity;
        throw NumericalError(msg.str());
    }
    return protection_leg / annuity;
}

TrancheLossSurface::TrancheLossSurface(PoolModel pool, std::vector<TrancheSpec> tranches,
                                       double tail_tol, int jobs)
    : pool_(std::move(pool)), tranches_(std::move(tranches)), tail_tol_(tail_tol), jobs_(jobs)
{
}

void TrancheLossSurface::prefetch(const std::vector<double>& times)
{
    std::vector<double> missing;
    for (double t : times) {
        if (t < 0.0) throw ConfigError("loss surface: negative time");
        if (!cache_.contains(t) &&
            std::find(missing.begin(), missing.end(), t) == missing.end())
            missing.push_back(t);
    }
    if (missing.empty()) return;

    std::vector<double> positive;
    std::vector<double> quarters;
    for (double t : missing) {
        if (t > 0.0) {
            positive.push_back(t);
            quarters.push_back(4.0 * t);
        }
    }
    std::vector<DefaultCountDistribution> dists;
    if (!quarters.empty()) dists = defaults_distributions(pool_, quarters, tail_tol_, jobs_);

    auto store = [&](double t, DefaultCountDistribution dist) {
        Entry e{std::move(dist), {}, 0.0};
        e.tranche_losses.reserve(tranches_.size());
        for (const auto& tr : tranches_)
            e.tranche_losses.push_back(expected_tranche_loss(e.dist, tr, pool_.recovery));
        e.portfolio_loss = expected_portfolio_loss(e.dist, pool_.recovery);
        cache_.emplace(t, std::move(e));
    };
    for (std::size_t i = 0; i < positive.size(); ++i) store(positive[i], std::move(dists[i]));
    if (std::find(missing.begin(), missing.end(), 0.0) != missing.end()) {
        DefaultCountDistribution none;
        none.pmf.assign(pool_.n_firms + 1, 0.0);
        none.pmf[0] = 1.0;
        none.captured_common_mass = 1.0;
        store(0.0, std::move(none));
    }
}

const TrancheLossSurface::Entry& TrancheLossSurface::entry(double t)
{
    prefetch({t});
    return cache_.at(t);
}

const std::vector<double>& TrancheLossSurface::tranche_losses(double t)
{
    return entry(t).tranche_losses;
}

double TrancheLossSurface::portfolio_loss(double t) { return entry(t).portfolio_loss; }

const DefaultCountDistribution& TrancheLossSurface::distribution(double t) { return entry(t).dist; }

namespace {

PoolModel pool_for(ModelMode mode, const PortfolioSpec& spec)
{
    const auto cm = ComparisonModel::matched(mode, spec);
    return PoolModel{spec.n_firms, spec.recovery, spec.firm, cm.idio, cm.common};
}

}  // namespace

std::vector<TrancheQuote> price_term_structure(const ValidatedModel& model,
                                               const std::vector<TrancheSpec>& tranches,
                                               const std::vector<double>& maturities,
                                               const PricingRequest& request)
{
    if (auto errors = check(tranches); !errors.empty()) throw ValidationError(std::move(errors));
    if (maturities.empty()) throw ConfigError("no maturities to price");
    const int ppy = model.cfg.payments_per_year;
    const double r = model.cfg.annual_rate();

    TrancheLossSurface surface(pool_for(request.mode, model.spec), tranches, request.tail_tol,
                               request.jobs);
    {
        const double longest = *std::max_element(maturities.begin(), maturities.end());
        surface.prefetch(grid_times(whole_periods(longest, ppy), ppy, kInitialSubintervals));
    }

    std::vector<TrancheQuote> quotes;
    for (double maturity : maturities) {
        const int periods = whole_periods(maturity, ppy);
        std::vector<double> payments(periods);
        for (int j = 0; j < periods; ++j) payments[j] = static_cast<double>(j + 1) / ppy;

        for (std::size_t i = 0; i < tranches.size(); ++i) {
            LossCurve curve = [&surface, i](const std::vector<double>& times) {
                surface.prefetch(times);
                std::vector<double> out;
                out.reserve(times.size());
                for (double t : times) out.push_back(surface.tranche_losses(t)[i]);
                return out;
            };
            TrancheQuote q;
            q.tranche = tranches[i];
            q.mode = request.mode;
            q.horizon_years = maturity;
            q.payment_times = payments;
            q.expected_loss = curve(payments);
            const auto leg = protection_leg(curve, r, maturity, ppy);
            q.protection_leg = leg.value;
            q.quadrature_subintervals = leg.subintervals_per_period;
            q.annuity = premium_annuity(q.expected_loss, payments, tranches[i].width(), r);
            q.spread = spread(q.protection_leg, q.annuity);
            quotes.push_back(std::move(q));
        }
    }
    return quotes;
}

std::vector<TrancheQuote> price_cdo(const ValidatedModel& model,
                                    const std::vector<TrancheSpec>& tranches,
                                    const PricingRequest& request)
{
    return price_term_structure(model, tranches, {model.cfg.horizon}, request);
}

std::vector<TrancheQuote> comparison_spreads(ModelMode mode, const ValidatedModel& model,
                                             const std::vector<TrancheSpec>& tranches,
                                             double horizon_years, int jobs)
{
    if (mode == ModelMode::dynamic_contagion)
        throw ConfigError("comparison_spreads requires the poisson or ajd_no_self mode");
    PricingRequest request;
    request.mode = mode;
    request.jobs = jobs;
    return price_term_structure(model, tranches, {horizon_years}, request);
}

}  // namespace contagion
