#pragma once

#include "contagion/inversion.hpp"
#include "contagion/model.hpp"
#include "contagion/process.hpp"

#include <span>
#include <vector>

namespace contagion {

/// Homogeneous pool with arbitrary event-process laws. Processes are in
/// quarter units; horizons passed alongside a PoolModel are in quarters.
struct PoolModel {
    int n_firms = 1;
    double recovery = 0.0;
    FirmParams firm;
    CountingProcess idio;
    CountingProcess common;
};

/// Pool driven by the dynamic contagion processes of `spec` (quarter units).
PoolModel contagion_pool(const PortfolioSpec& spec);

struct DefaultCountDistribution {
    double horizon = 0.0;
    std::vector<double> pmf;            ///< P(D(t) = j), j = 0..N
    int common_terms = 0;               ///< number of common-event counts mixed
    double captured_common_mass = 0.0;  ///< Σ P(N(t) = n) over the mixed terms

    double mean() const;
};

/// P(τ ≤ t | N(t) = n) = 1 − d̃ⁿ·E[θ^{N_i(t)}], given E[θ^{N_i(t)}].
double marginal_default_prob(const FirmParams& firm, double idio_survival_pgf, int n);

/// Same, evaluating E[θ^{N_i(t)}] with the closed-form transform (t in quarters).
double marginal_default_prob(const FirmParams& firm, const ContagionParams& idio, double t, int n);

/// Binomial(N, p) mass function, evaluated in log space.
std::vector<double> conditional_count_pmf(double p, int n_firms);

/// Σ_n P(N(t) = n)·Binomial(N, P_i(t, n)), truncated once the common mass
/// captured reaches 1 − tail_tol. Never renormalised.
DefaultCountDistribution mix_defaults(const FirmParams& firm, int n_firms, double idio_survival_pgf,
                                      std::span<const double> common_pmf, double tail_tol,
                                      double horizon);

/// P(D(t) = j) for the dynamic contagion pool, t in quarters.
DefaultCountDistribution defaults_distribution(const PortfolioSpec& spec, double t,
                                               double tail_tol = 1e-8);

/// Batch version sharing one PGF inversion across horizons (quarters).
std::vector<DefaultCountDistribution> defaults_distributions(const PoolModel& pool,
                                                             const std::vector<double>& horizons,
                                                             double tail_tol = 1e-8, int jobs = 1);

/// One firm of a heterogeneous pool. `weight` is the loss-given-default
/// weight M_i = 1 − w_i entering the loss as M_i/N per default.
struct WeightedFirm {
    FirmParams firm;
    double weight = 1.0;
};

/// E[u^{L(t)}] = Σ_n P(N(t)=n) Π_i (1 − P_i(t,n) + P_i(t,n)·u^{M_i/N}).
/// Diagnostic only; the idiosyncratic law `idio` is shared by all firms.
double loss_pgf_general(std::span<const WeightedFirm> firms, const ContagionParams& idio,
                        std::span<const double> common_pmf, double u, double t);

double loss_pgf_general(std::span<const WeightedFirm> firms, const ContagionParams& idio,
                        const ContagionParams& common, double u, double t, double tail_tol = 1e-10);

}  // namespace contagion
