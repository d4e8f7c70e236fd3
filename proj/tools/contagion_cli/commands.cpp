#include "commands.hpp"

#include "csv.hpp"

#include "contagion/cdo.hpp"
#include "contagion/inversion.hpp"
#include "contagion/parallel.hpp"
#include "contagion/portfolio.hpp"
#include "contagion/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

namespace cli {

using namespace contagion;

std::string Context::provenance() const
{
    return std::string("contagion ") + CONTAGION_VERSION + " command=" + command +
           " config=" + cfg.resolved().dump();
}

namespace {

CsvTable table(const Context& ctx, std::vector<std::string> header)
{
    CsvTable t(std::move(header));
    t.comment(ctx.provenance());
    return t;
}

std::vector<double> sorted_unique(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

ValidatedModel validated(const PortfolioSpec& spec, const PricingConfig& pricing)
{
    try {
        return validate(spec, pricing);
    } catch (const ValidationError& e) {
        std::vector<FieldError> errors;
        for (const auto& f : e.errors()) errors.push_back({"model." + f.field, f.message});
        throw ValidationError(std::move(errors));
    }
}

PricingRequest request_for(const Context& ctx, int jobs)
{
    PricingRequest r;
    r.mode = ctx.cfg.mode;
    r.tail_tol = ctx.cfg.tail_tol;
    r.jobs = jobs;
    return r;
}

std::string tranche_label(const TrancheSpec& t)
{
    return format_number(t.attach) + "-" + format_number(t.detach);
}

}  // namespace

int cmd_price(const Context& ctx)
{
    const auto model = validated(ctx.cfg.spec, ctx.cfg.pricing);
    const auto quotes = price_term_structure(model, ctx.cfg.tranches,
                                             sorted_unique(ctx.cfg.maturities),
                                             request_for(ctx, ctx.jobs));
    auto out = table(ctx, {"mode", "tranche_attach", "tranche_detach", "T_years",
                           "spread_table_units", "spread_fraction", "V", "annuity"});
    for (const auto& q : quotes) {
        out.row({to_string(q.mode), q.tranche.attach, q.tranche.detach, q.horizon_years,
                 q.spread_table_units(), q.spread, q.protection_leg, q.annuity});
    }
    out.write_atomically(ctx.output_dir / "price.csv");
    return exit_ok;
}

namespace {

const char* direction(const std::vector<double>& series)
{
    bool up = true, down = true;
    for (std::size_t i = 1; i < series.size(); ++i) {
        if (series[i] < series[i - 1]) up = false;
        if (series[i] > series[i - 1]) down = false;
    }
    if (up && down) return "flat";
    if (up) return "nondecreasing";
    if (down) return "nonincreasing";
    return "mixed";
}

}  // namespace

int cmd_sweep(const Context& ctx)
{
    const auto& cfg = ctx.cfg;
    const auto maturities = sorted_unique(cfg.sweep.maturities);
    auto summary = table(ctx, {"parameter", "tranche", "tranche_attach", "tranche_detach",
                               "T_years", "min_spread", "max_spread", "relative_variation",
                               "direction"});
    for (const auto& parameter : cfg.sweep.parameters) {
        const auto& grid = cfg.sweep.grids.at(parameter);
        std::vector<std::vector<TrancheQuote>> results(grid.size());
        std::vector<ValidatedModel> models;
        for (std::size_t g = 0; g < grid.size(); ++g) {
            PortfolioSpec spec = cfg.spec;
            apply_sweep_value(parameter, grid[g], spec);
            try {
                models.push_back(validated(spec, cfg.pricing));
            } catch (const ValidationError& e) {
                std::vector<FieldError> errors;
                for (const auto& f : e.errors())
                    errors.push_back({"sweep.grids." + parameter + "[" + std::to_string(g) + "]",
                                      f.field + ": " + f.message});
                throw ValidationError(std::move(errors));
            }
        }
        parallel_for(grid.size(), ctx.jobs, [&](std::size_t g) {
            results[g] = price_term_structure(models[g], cfg.tranches, maturities,
                                              request_for(ctx, 1));
        });

        auto out = table(ctx, {"parameter", "value", "tranche", "tranche_attach", "tranche_detach",
                               "T_years", "spread_table_units", "spread_fraction"});
        for (std::size_t g = 0; g < grid.size(); ++g) {
            for (const auto& q : results[g]) {
                out.row({parameter, grid[g], tranche_label(q.tranche), q.tranche.attach,
                         q.tranche.detach, q.horizon_years, q.spread_table_units(), q.spread});
            }
        }
        out.write_atomically(ctx.output_dir / ("sweep_" + parameter + ".csv"));

        const std::size_t per_point = results.front().size();
        for (std::size_t k = 0; k < per_point; ++k) {
            std::vector<double> series;
            for (const auto& r : results) series.push_back(r[k].spread_table_units());
            const auto [lo, hi] = std::minmax_element(series.begin(), series.end());
            const double variation = *hi > 0.0 ? (*hi - *lo) / *hi : 0.0;
            const auto& q = results.front()[k];
            summary.row({parameter, tranche_label(q.tranche), q.tranche.attach, q.tranche.detach,
                         q.horizon_years, *lo, *hi, variation, direction(series)});
        }
    }
    summary.write_atomically(ctx.output_dir / "sweep_summary.csv");
    return exit_ok;
}

int cmd_dist(const Context& ctx)
{
    const auto model = validated(ctx.cfg.spec, ctx.cfg.pricing);
    const double horizon_q = 4.0 * ctx.cfg.dist.horizon;
    const auto cm = ComparisonModel::matched(ctx.cfg.mode, model.spec);

    InversionOptions inv;
    inv.tail_tol = ctx.cfg.dist.tail_tol;
    inv.jobs = ctx.jobs;
    const auto events = count_distributions(cm.common, {horizon_q}, inv).front();
    const PoolModel pool{model.spec.n_firms, model.spec.recovery, model.spec.firm, cm.idio,
                         cm.common};
    const auto defaults =
        defaults_distributions(pool, {horizon_q}, ctx.cfg.dist.tail_tol, ctx.jobs).front();

    auto ev = table(ctx, {"n", "probability"});
    ev.comment("horizon_quarters=" + format_number(horizon_q) +
               " captured_mass=" + format_number(events.captured_mass) +
               " fft_size=" + std::to_string(events.fft_size) +
               " max_imag_residue=" + format_number(events.max_imag_residue) +
               " mean=" + format_number(events.mean()));
    for (std::size_t n = 0; n < events.pmf.size(); ++n) ev.row({n, events.pmf[n]});
    ev.write_atomically(ctx.output_dir / "dist_events.csv");

    double mass = 0.0;
    for (double p : defaults.pmf) mass += p;
    auto df = table(ctx, {"j", "probability", "loss_fraction"});
    df.comment("horizon_quarters=" + format_number(horizon_q) + " captured_mass=" +
               format_number(mass) + " common_terms=" + std::to_string(defaults.common_terms) +
               " captured_common_mass=" + format_number(defaults.captured_common_mass) +
               " mean=" + format_number(defaults.mean()));
    for (std::size_t j = 0; j < defaults.pmf.size(); ++j) {
        df.row({j, defaults.pmf[j],
                (1.0 - model.spec.recovery) * static_cast<double>(j) / model.spec.n_firms});
    }
    df.write_atomically(ctx.output_dir / "dist_defaults.csv");
    return exit_ok;
}

namespace {

struct CheckRow {
    std::string check;
    std::string label;
    double analytic;
    double estimate;
    double std_error;
    double discrepancy;
    double tolerance;
    bool pass;
};

Estimate mean_with_error(const std::vector<double>& x)
{
    const double n = static_cast<double>(x.size());
    double sum = 0.0;
    for (double v : x) sum += v;
    const double mean = sum / n;
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    return {mean, x.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0};
}

SimConfig simulation_config(const Context& ctx)
{
    SimConfig mc = ctx.cfg.simulation.mc;
    mc.jobs = ctx.jobs;
    return mc;
}

// Largest |p_analytic − p_mc| against three times the largest binomial
// standard error over the support.
CheckRow histogram_check(const std::string& name, const std::vector<double>& analytic,
                         const Histogram& mc)
{
    const std::size_t size = std::max(analytic.size(), mc.probability.size());
    double sup = 0.0;
    double max_se = 0.0;
    const double n = static_cast<double>(mc.n_paths);
    for (std::size_t j = 0; j < size; ++j) {
        const double a = j < analytic.size() ? analytic[j] : 0.0;
        const double m = j < mc.probability.size() ? mc.probability[j].mean : 0.0;
        sup = std::max(sup, std::abs(a - m));
        max_se = std::max(max_se, std::sqrt(a * (1.0 - a) / n));
    }
    return {name, "sup_norm", 0.0, sup, max_se, sup, 3.0 * max_se, sup <= 3.0 * max_se};
}

}  // namespace

int cmd_validate(const Context& ctx)
{
    if (!ctx.cfg.simulation.present)
        throw ValidationError(
            std::vector<FieldError>{{"simulation", "validate requires a simulation section"}});
    const auto model = validated(ctx.cfg.spec, ctx.cfg.pricing);
    const auto& common = model.spec.common;
    const double horizon_q = model.horizon_quarters();
    const SimConfig mc = simulation_config(ctx);
    std::vector<CheckRow> rows;

    for (double theta : {0.5, 0.9, 0.97, 0.99}) {
        for (double t : {1.0, 4.0, 12.0}) {
            const double a =
                joint_transform(common, theta, 0.0, t, Method::closed_form, ctx.transform).value.real();
            const double b =
                joint_transform(common, theta, 0.0, t, Method::ode, ctx.transform).value.real();
            const double rel = std::abs(a - b) / std::abs(a);
            rows.push_back({"closed_form_vs_ode",
                            "theta=" + format_number(theta) + " T=" + format_number(t), a, b, 0.0,
                            rel, 1e-8, rel <= 1e-8});
        }
    }

    const double theta = model.spec.firm.theta();
    const auto sample = simulate_snapshots(common, {horizon_q}, mc);
    for (double v : {0.0, 0.5}) {
        const double a = joint_transform(common, theta, v, horizon_q, ctx.transform).value.real();
        const auto e = transform_estimate(sample, 0, theta, v);
        const double diff = std::abs(a - e.mean);
        rows.push_back({"transform_mc",
                        "theta=" + format_number(theta) + " v=" + format_number(v) +
                            " T=" + format_number(horizon_q),
                        a, e.mean, e.std_error, diff, 3.0 * e.std_error, diff <= 3.0 * e.std_error});
    }

    InversionOptions inv;
    inv.tail_tol = 1e-8;
    inv.jobs = ctx.jobs;
    inv.transform = ctx.transform;
    const auto events = count_distributions(common, {horizon_q}, inv).front();
    rows.push_back({"count_distribution_mass", "T=" + format_number(horizon_q), 1.0,
                    events.captured_mass, 0.0, 1.0 - events.captured_mass, 1e-6,
                    events.captured_mass >= 1.0 - 1e-6});
    rows.push_back(histogram_check("count_distribution_mc", events.pmf, count_histogram(sample, 0)));

    SimConfig portfolio_mc = mc;
    portfolio_mc.n_paths = ctx.cfg.simulation.portfolio_paths;
    portfolio_mc.dt = ctx.cfg.simulation.portfolio_dt;
    const auto defaults = defaults_distribution(model.spec, horizon_q);
    const auto defaults_mc =
        estimate_portfolio_distribution(model.spec, {horizon_q}, portfolio_mc).front();
    rows.push_back(histogram_check("defaults_distribution_mc", defaults.pmf, defaults_mc));

    const auto quotes = price_cdo(model, ctx.cfg.tranches, request_for(ctx, ctx.jobs));
    const auto legs = estimate_tranche_legs(model, ctx.cfg.tranches, portfolio_mc);
    for (std::size_t i = 0; i < quotes.size(); ++i) {
        const auto& e = legs[i].protection_leg;
        const double diff = std::abs(quotes[i].protection_leg - e.mean);
        rows.push_back({"protection_leg_mc", "tranche=" + tranche_label(quotes[i].tranche),
                        quotes[i].protection_leg, e.mean, e.std_error, diff, 3.0 * e.std_error,
                        diff <= 3.0 * e.std_error});
    }

    auto out = table(ctx, {"check", "case", "analytic", "estimate", "std_error", "discrepancy",
                           "tolerance", "pass"});
    bool all = true;
    for (const auto& r : rows) {
        out.row({r.check, r.label, r.analytic, r.estimate, r.std_error, r.discrepancy, r.tolerance,
                 r.pass});
        all = all && r.pass;
        std::cout << (r.pass ? "PASS " : "FAIL ") << r.check << " " << r.label
                  << " discrepancy=" << format_number(r.discrepancy)
                  << " tolerance=" << format_number(r.tolerance) << "\n";
    }
    out.write_atomically(ctx.output_dir / "validate.csv");
    return all ? exit_ok : exit_validation;
}

int cmd_simulate(const Context& ctx)
{
    if (!ctx.cfg.simulation.present)
        throw ValidationError(
            std::vector<FieldError>{{"simulation", "simulate requires a simulation section"}});
    const auto model = validated(ctx.cfg.spec, ctx.cfg.pricing);
    const double horizon_q = model.horizon_quarters();
    const auto sample = simulate_snapshots(model.spec.common, {horizon_q}, simulation_config(ctx));
    const auto hist = count_histogram(sample, 0);

    auto counts = table(ctx, {"n", "probability", "std_error"});
    for (std::size_t n = 0; n < hist.probability.size(); ++n)
        counts.row({n, hist.probability[n].mean, hist.probability[n].std_error});
    counts.write_atomically(ctx.output_dir / "simulate_counts.csv");

    std::vector<double> count_values, lambda_values;
    for (std::int64_t p = 0; p < sample.n_paths; ++p) {
        count_values.push_back(sample.count(p, 0));
        lambda_values.push_back(sample.lambda(p, 0));
    }
    const auto mean_count = mean_with_error(count_values);
    const auto mean_lambda = mean_with_error(lambda_values);
    const double theta = model.spec.firm.theta();
    const auto t0 = transform_estimate(sample, 0, theta, 0.0);
    const auto t5 = transform_estimate(sample, 0, theta, 0.5);
    const auto avg = time_average_intensity(sample, 0);

    auto summary = table(ctx, {"quantity", "value", "std_error"});
    summary.row({"mean_event_count", mean_count.mean, mean_count.std_error});
    summary.row({"mean_terminal_intensity", mean_lambda.mean, mean_lambda.std_error});
    summary.row({"time_average_intensity", avg.mean, avg.std_error});
    summary.row({"transform_theta_v0", t0.mean, t0.std_error});
    summary.row({"transform_theta_v0.5", t5.mean, t5.std_error});
    summary.write_atomically(ctx.output_dir / "simulate_summary.csv");
    return exit_ok;
}

}  // namespace cli
