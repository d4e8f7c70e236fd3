#pragma once

#include "contagion/cdo.hpp"
#include "contagion/model.hpp"
#include "contagion/simulation.hpp"

#include "json.hpp"

#include <map>
#include <string>
#include <vector>

namespace cli {

using nlohmann::json;

inline const std::vector<std::string>& sweep_parameter_names()
{
    static const std::vector<std::string> names{"lambda0", "beta", "eta", "w", "sigma"};
    return names;
}

/// Default sweep grid for `parameter`.
std::vector<double> default_sweep_grid(const std::string& parameter);

/// Sets one swept quantity: lambda0, beta, eta and sigma act on the common
/// process, w is the recovery rate.
void apply_sweep_value(const std::string& parameter, double value, contagion::PortfolioSpec& spec);

struct SweepSection {
    std::vector<std::string> parameters = sweep_parameter_names();
    std::map<std::string, std::vector<double>> grids;
    std::vector<double> maturities;  ///< years; empty means the model horizon
};

struct SimulationSection {
    bool present = false;
    contagion::SimConfig mc;
    std::int64_t portfolio_paths = 20000;
    double portfolio_dt = 0.01;
};

struct DistSection {
    double horizon = 0.0;  ///< years; 0 means the model horizon
    double tail_tol = 1e-10;
};

struct RunConfig {
    bool base_case = false;
    contagion::PortfolioSpec spec;
    contagion::PricingConfig pricing;
    std::vector<contagion::TrancheSpec> tranches;
    std::vector<double> maturities;  ///< years
    contagion::ModelMode mode = contagion::ModelMode::dynamic_contagion;
    double tail_tol = 1e-8;
    SweepSection sweep;
    SimulationSection simulation;
    DistSection dist;
    std::string output_dir = ".";

    /// Everything that determines the numbers in an output file. The output
    /// directory and job count are left out so they cannot change the bytes.
    json resolved() const;
};

/// Parses a configuration document. Unknown keys and missing required keys
/// are reported together as a contagion::ValidationError keyed by full path.
RunConfig parse_config(const json& doc);
RunConfig load_config(const std::string& path);

}  // namespace cli
