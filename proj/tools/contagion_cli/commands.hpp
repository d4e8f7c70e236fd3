#pragma once

#include "config.hpp"

#include "contagion/transform.hpp"

#include <filesystem>
#include <string>

namespace cli {

enum ExitCode { exit_ok = 0, exit_config = 2, exit_numerical = 3, exit_validation = 4 };

struct Context {
    RunConfig cfg;
    std::string command;
    int jobs = 1;
    std::filesystem::path output_dir;
    contagion::TransformOptions transform;  ///< analytic transform settings for `validate`

    /// First comment line of every CSV: engine version and resolved config.
    std::string provenance() const;
};

int cmd_price(const Context& ctx);
int cmd_sweep(const Context& ctx);
int cmd_dist(const Context& ctx);
int cmd_validate(const Context& ctx);
int cmd_simulate(const Context& ctx);

}  // namespace cli
