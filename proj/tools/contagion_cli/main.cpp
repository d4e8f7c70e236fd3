#include "commands.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>

namespace {

struct Options {
    std::string config;
    std::string output;
    int jobs = 1;
    std::optional<std::uint64_t> seed;
    std::string mode;
    bool flip_diffusion_sign = false;
};

void report(const char* kind, const std::string& message,
            const std::vector<contagion::FieldError>& fields = {})
{
    nlohmann::json line{{"error", kind}, {"message", message}};
    if (!fields.empty()) {
        line["fields"] = nlohmann::json::array();
        for (const auto& f : fields)
            line["fields"].push_back({{"field", f.field}, {"message", f.message}});
    }
    std::cerr << line.dump() << std::endl;
}

int run(const std::string& command, const Options& opt)
{
    using namespace cli;
    static const std::map<std::string, std::function<int(const Context&)>> commands{
        {"price", cmd_price},       {"sweep", cmd_sweep},       {"dist", cmd_dist},
        {"validate", cmd_validate}, {"simulate", cmd_simulate},
    };
    try {
        if (opt.jobs < 1)
            throw contagion::ValidationError(
                std::vector<contagion::FieldError>{{"--jobs", "must be >= 1"}});
        Context ctx;
        ctx.command = command;
        ctx.cfg = load_config(opt.config);
        if (opt.seed) ctx.cfg.simulation.mc.seed = *opt.seed;
        if (!opt.mode.empty()) ctx.cfg.mode = contagion::model_mode_from_string(opt.mode);
        ctx.jobs = opt.jobs;
        if (!opt.output.empty()) {
            ctx.output_dir = opt.output;
        } else if (const char* env = std::getenv("CONTAGION_OUTPUT_DIR"); env && *env) {
            ctx.output_dir = env;
        } else {
            ctx.output_dir = ctx.cfg.output_dir;
        }
        if (opt.flip_diffusion_sign)
            ctx.transform.diffusion_sign = contagion::DiffusionSign::printed;
        return commands.at(command)(ctx);
    } catch (const contagion::ValidationError& e) {
        report("config", e.what(), e.errors());
        return exit_config;
    } catch (const contagion::ConfigError& e) {
        report("config", e.what());
        return exit_config;
    } catch (const contagion::NumericalError& e) {
        report("numerical", e.what());
        return exit_numerical;
    } catch (const std::filesystem::filesystem_error& e) {
        report("config", e.what());
        return exit_config;
    } catch (const std::exception& e) {
        report("numerical", e.what());
        return exit_numerical;
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Dynamic contagion CDO pricing engine"};
    app.set_version_flag("--version", std::string(CONTAGION_VERSION));
    app.require_subcommand(1);

    Options opt;
    const std::vector<std::pair<const char*, const char*>> subcommands{
        {"price", "Tranche spreads for every configured maturity"},
        {"sweep", "Spread sensitivity to lambda0, beta, eta, w and sigma"},
        {"dist", "Event-count and default-count distributions"},
        {"validate", "Analytic results against the Monte Carlo oracle"},
        {"simulate", "Monte Carlo estimates for the common event process"},
    };
    for (const auto& [name, help] : subcommands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", opt.config, "Configuration file (JSON)")->required();
        sub->add_option("--output", opt.output, "Output directory");
        sub->add_option("--jobs", opt.jobs, "Worker threads");
        sub->add_option("--seed", opt.seed, "Simulation seed, overrides simulation.seed");
        sub->add_option("--mode", opt.mode, "Event model")
            ->check(CLI::IsMember({"dynamic", "poisson", "ajd_no_self"}));
        sub->add_flag("--debug-flip-diffusion-sign", opt.flip_diffusion_sign,
                      "Use +1/2 sigma^2 in the transform exponent (mutation check)")
            ->group("");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        report("usage", e.what());
        return cli::exit_config;
    }
    return run(app.get_subcommands().front()->get_name(), opt);
}
