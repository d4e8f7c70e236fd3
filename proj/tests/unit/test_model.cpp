#include "contagion/model.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace contagion;

namespace {

bool has_field(const std::vector<FieldError>& errors, const std::string& field)
{
    return std::any_of(errors.begin(), errors.end(),
                       [&](const FieldError& e) { return e.field == field; });
}

}  // namespace

TEST(Validate, AcceptsBaseCaseVerbatim)
{
    const auto spec = base_case_portfolio();
    const auto model = validate(spec, base_case_pricing());
    EXPECT_EQ(model.spec.n_firms, 50);
    EXPECT_DOUBLE_EQ(model.spec.recovery, 0.4);
    EXPECT_NEAR(model.spec.firm.d, 0.03, 1e-15);
    EXPECT_DOUBLE_EQ(model.spec.firm.theta(), 0.97);
    EXPECT_DOUBLE_EQ(model.spec.firm.dtilde(), std::sqrt(0.97));
    EXPECT_EQ(model.spec.common, spec.common);
    EXPECT_DOUBLE_EQ(model.horizon_quarters(), 12.0);
}

TEST(Validate, RejectsNonStationaryProcess)
{
    auto spec = base_case_portfolio();
    spec.common.beta = 0.4;
    try {
        validate(spec, base_case_pricing());
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        ASSERT_TRUE(has_field(e.errors(), "common.beta"));
        EXPECT_NE(std::string(e.what()).find("beta*delta=0.8"), std::string::npos) << e.what();
    }
}

TEST(Validate, ReportsEveryViolation)
{
    auto spec = base_case_portfolio();
    spec.n_firms = 0;
    spec.recovery = 1.0;
    spec.firm.d = 0.0;
    spec.idio.sigma = -1.0;
    auto cfg = base_case_pricing();
    cfg.r = -0.01;
    try {
        validate(spec, cfg);
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        for (const char* field : {"n_firms", "recovery", "firm.d", "idio.sigma", "r"})
            EXPECT_TRUE(has_field(e.errors(), field)) << field;
    }
}

TEST(Validate, AdmitsFirstEventKills)
{
    auto spec = base_case_portfolio();
    spec.firm = {.d = 1.0, .ell = 1.0};
    const auto model = validate(spec, base_case_pricing());
    EXPECT_EQ(model.spec.firm.theta(), 0.0);
    EXPECT_EQ(model.spec.firm.dtilde(), 0.0);
    FirmParams unloaded{.d = 1.0, .ell = 0.0};
    EXPECT_EQ(unloaded.dtilde(), 1.0);
}

TEST(Validate, DtildeIsThetaToTheLoading)
{
    for (double d : {0.01, 0.3, 0.9})
        for (double ell : {0.0, 0.5, 1.0, 2.5}) {
            FirmParams f{d, ell};
            EXPECT_EQ(f.dtilde(), std::pow(f.theta(), ell));
            EXPECT_LE(f.dtilde(), 1.0);
            EXPECT_GE(f.dtilde(), 0.0);
        }
}

TEST(Tranches, MustPartitionUnitInterval)
{
    EXPECT_TRUE(check(base_case_tranches()).empty());
    EXPECT_TRUE(has_field(check(std::vector<TrancheSpec>{}), "tranches"));
    EXPECT_TRUE(has_field(check({{0.0, 0.1}, {0.2, 1.0}}), "tranches[1]"));
    EXPECT_TRUE(has_field(check({{0.05, 1.0}}), "tranches[0]"));
    EXPECT_TRUE(has_field(check({{0.0, 0.5}}), "tranches[0]"));
    EXPECT_TRUE(has_field(check({{0.0, 0.5}, {0.5, 0.5}, {0.5, 1.0}}), "tranches[1]"));
}

TEST(Pricing, HorizonMustBeWholePeriods)
{
    auto cfg = base_case_pricing();
    cfg.horizon = 3.1;
    EXPECT_TRUE(has_field(check(cfg), "horizon"));
    cfg.horizon = 3.25;
    EXPECT_TRUE(check(cfg).empty());
}

TEST(Pricing, RateUnitControlsAnnualRate)
{
    auto cfg = base_case_pricing();
    EXPECT_DOUBLE_EQ(cfg.annual_rate(), 0.03);
    cfg.rate_unit = TimeUnit::quarter;
    EXPECT_DOUBLE_EQ(cfg.annual_rate(), 0.12);
}

TEST(UnitConvert, QuarterToYear)
{
    const auto q = base_case_portfolio().common;
    const auto y = unit_convert(q, TimeUnit::quarter, TimeUnit::year);
    EXPECT_DOUBLE_EQ(y.lambda0, 6.0);
    EXPECT_DOUBLE_EQ(y.eta, 6.0);
    EXPECT_DOUBLE_EQ(y.delta, 8.0);
    EXPECT_DOUBLE_EQ(y.beta, 0.375);
    EXPECT_DOUBLE_EQ(y.sigma, 0.4 * 8.0);
    EXPECT_DOUBLE_EQ(y.beta * y.delta, 3.0);
}

TEST(UnitConvert, IdentityAndRoundTrip)
{
    const ContagionParams p{.lambda0 = 0.7, .delta = 3.3, .eta = 1.1, .sigma = 0.37, .beta = 0.9};
    EXPECT_EQ(unit_convert(p, TimeUnit::year, TimeUnit::year), p);
    EXPECT_EQ(unit_convert(p, TimeUnit::quarter, TimeUnit::quarter), p);
    for (auto [from, to] : {std::pair{TimeUnit::quarter, TimeUnit::year},
                            std::pair{TimeUnit::year, TimeUnit::quarter}}) {
        const auto there = unit_convert(p, from, to);
        const auto back = unit_convert(there, to, from);
        EXPECT_NEAR(back.lambda0, p.lambda0, 1e-14 * p.lambda0);
        EXPECT_NEAR(back.delta, p.delta, 1e-14 * p.delta);
        EXPECT_NEAR(back.eta, p.eta, 1e-14 * p.eta);
        EXPECT_NEAR(back.sigma, p.sigma, 1e-14 * p.sigma);
        EXPECT_NEAR(back.beta, p.beta, 1e-14 * p.beta);
        EXPECT_NEAR(there.beta * there.delta, p.beta * p.delta, 1e-15 * p.beta * p.delta);
    }
}

TEST(UnitConvert, ValidateConvertsYearQuotedProcesses)
{
    auto spec = base_case_portfolio();
    spec.common = unit_convert(spec.common, TimeUnit::quarter, TimeUnit::year);
    spec.idio = spec.common;
    auto cfg = base_case_pricing();
    cfg.time_unit = TimeUnit::year;
    const auto model = validate(spec, cfg);
    EXPECT_NEAR(model.spec.common.lambda0, 1.5, 1e-15);
    EXPECT_NEAR(model.spec.common.beta, 1.5, 1e-15);
    EXPECT_NEAR(model.spec.common.sigma, 0.4, 1e-15);
}

TEST(TimeUnit, NamesRoundTrip)
{
    for (auto u : {TimeUnit::quarter, TimeUnit::year})
        EXPECT_EQ(time_unit_from_string(to_string(u)), u);
    EXPECT_THROW(time_unit_from_string("month"), ConfigError);
}
