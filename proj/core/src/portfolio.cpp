#include "contagion/portfolio.hpp"

#include "contagion/parallel.hpp"

#include <cmath>
#include <map>

namespace contagion {

double DefaultCountDistribution::mean() const
{
    double m = 0.0;
    for (std::size_t j = 0; j < pmf.size(); ++j) m += static_cast<double>(j) * pmf[j];
    return m;
}

PoolModel contagion_pool(const PortfolioSpec& spec)
{
    return PoolModel{spec.n_firms, spec.recovery, spec.firm, spec.idio, spec.common};
}

double marginal_default_prob(const FirmParams& firm, double idio_survival_pgf, int n)
{
    const double p = 1.0 - std::pow(firm.dtilde(), n) * idio_survival_pgf;
    return std::clamp(p, 0.0, 1.0);
}

double marginal_default_prob(const FirmParams& firm, const ContagionParams& idio, double t, int n)
{
    return marginal_default_prob(firm, pgf(idio, firm.theta(), t), n);
}

namespace {

std::vector<double> log_binomial_coefficients(int n_firms)
{
    std::vector<double> out(n_firms + 1);
    const double log_n_fact = std::lgamma(n_firms + 1.0);
    for (int j = 0; j <= n_firms; ++j)
        out[j] = log_n_fact - std::lgamma(j + 1.0) - std::lgamma(n_firms - j + 1.0);
    return out;
}

// Adds weight·Binomial(N, p) into `acc`.
void accumulate_binomial(std::vector<double>& acc, const std::vector<double>& log_coef, double p,
                         double weight)
{
    const int n_firms = static_cast<int>(log_coef.size()) - 1;
    if (p <= 0.0) {
        acc[0] += weight;
        return;
    }
    if (p >= 1.0) {
        acc[n_firms] += weight;
        return;
    }
    const double log_p = std::log(p);
    const double log_q = std::log1p(-p);
    for (int j = 0; j <= n_firms; ++j)
        acc[j] += weight * std::exp(log_coef[j] + j * log_p + (n_firms - j) * log_q);
}

}  // namespace

std::vector<double> conditional_count_pmf(double p, int n_firms)
{
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("conditional_count_pmf: p must lie in [0, 1]");
    if (n_firms < 0) throw ConfigError("conditional_count_pmf: N must be >= 0");
    std::vector<double> pmf(n_firms + 1, 0.0);
    accumulate_binomial(pmf, log_binomial_coefficients(n_firms), p, 1.0);
    return pmf;
}

DefaultCountDistribution mix_defaults(const FirmParams& firm, int n_firms, double idio_survival_pgf,
                                      std::span<const double> common_pmf, double tail_tol,
                                      double horizon)
{
    DefaultCountDistribution dist;
    dist.horizon = horizon;
    dist.pmf.assign(n_firms + 1, 0.0);
    const auto log_coef = log_binomial_coefficients(n_firms);
    double captured = 0.0;
    int terms = 0;
    for (std::size_t n = 0; n < common_pmf.size(); ++n) {
        const double weight = common_pmf[n];
        ++terms;
        captured += weight;
        if (weight > 0.0) {
            accumulate_binomial(dist.pmf, log_coef,
                                marginal_default_prob(firm, idio_survival_pgf, static_cast<int>(n)),
                                weight);
        }
        if (captured >= 1.0 - tail_tol) break;
    }
    dist.common_terms = terms;
    dist.captured_common_mass = captured;
    return dist;
}

DefaultCountDistribution defaults_distribution(const PortfolioSpec& spec, double t, double tail_tol)
{
    return defaults_distributions(contagion_pool(spec), {t}, tail_tol).front();
}

std::vector<DefaultCountDistribution> defaults_distributions(const PoolModel& pool,
                                                             const std::vector<double>& horizons,
                                                             double tail_tol, int jobs)
{
    InversionOptions inv;
    inv.tail_tol = 0.1 * tail_tol;
    inv.jobs = jobs;
    const auto common = count_distributions(pool.common, horizons, inv);
    std::vector<DefaultCountDistribution> out(horizons.size());
    parallel_for(horizons.size(), jobs, [&](std::size_t h) {
        const double idio_pgf = pgf(pool.idio, pool.firm.theta(), horizons[h]);
        out[h] = mix_defaults(pool.firm, pool.n_firms, idio_pgf, common[h].pmf, tail_tol,
                              horizons[h]);
    });
    return out;
}

double loss_pgf_general(std::span<const WeightedFirm> firms, const ContagionParams& idio,
                        std::span<const double> common_pmf, double u, double t)
{
    const double n_firms = static_cast<double>(firms.size());
    std::map<double, double> idio_pgf;
    for (const auto& f : firms) {
        if (!idio_pgf.contains(f.firm.theta())) idio_pgf[f.firm.theta()] = pgf(idio, f.firm.theta(), t);
    }
    double total = 0.0;
    for (std::size_t n = 0; n < common_pmf.size(); ++n) {
        double product = 1.0;
        for (const auto& f : firms) {
            const double p =
                marginal_default_prob(f.firm, idio_pgf.at(f.firm.theta()), static_cast<int>(n));
            product *= 1.0 - p + p * std::pow(u, f.weight / n_firms);
        }
        total += common_pmf[n] * product;
    }
    return total;
}

double loss_pgf_general(std::span<const WeightedFirm> firms, const ContagionParams& idio,
                        const ContagionParams& common, double u, double t, double tail_tol)
{
    InversionOptions inv;
    inv.tail_tol = tail_tol;
    const auto dist = count_distributions(common, {t}, inv).front();
    return loss_pgf_general(firms, idio, dist.pmf, u, t);
}

}  // namespace contagion
