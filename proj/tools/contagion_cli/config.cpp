#include "config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace cli {

using namespace contagion;

std::vector<double> default_sweep_grid(const std::string& parameter)
{
    if (parameter == "lambda0") return {0.5, 1.0, 1.5, 2.0, 2.5};
    if (parameter == "beta") return {1.0, 1.25, 1.5, 2.0, 2.5, 3.0};
    if (parameter == "eta") return {0.5, 0.75, 1.0, 1.25, 1.5, 2.0, 2.5, 3.0};
    if (parameter == "w") return {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7};
    if (parameter == "sigma") return {0.0, 0.2, 0.4, 0.6, 0.8};
    throw ConfigError("unknown sweep parameter '" + parameter + "'");
}

void apply_sweep_value(const std::string& parameter, double value, PortfolioSpec& spec)
{
    if (parameter == "lambda0") spec.common.lambda0 = value;
    else if (parameter == "beta") spec.common.beta = value;
    else if (parameter == "eta") spec.common.eta = value;
    else if (parameter == "sigma") spec.common.sigma = value;
    else if (parameter == "w") spec.recovery = value;
    else throw ConfigError("unknown sweep parameter '" + parameter + "'");
}

namespace {

const char* type_name(const json& j)
{
    return j.type_name();
}

/// Reads one JSON object, remembering which keys were consumed so that the
/// rest can be reported as unknown.
class Section {
public:
    Section(const json* node, std::string path, std::vector<FieldError>& errors)
        : node_(node), path_(std::move(path)), errors_(errors)
    {
        if (node_ && !node_->is_object()) {
            fail(path_, std::string("expected an object, got ") + type_name(*node_));
            node_ = nullptr;
        }
    }

    bool present() const { return node_ != nullptr; }

    std::string key_path(const std::string& key) const
    {
        return path_.empty() ? key : path_ + "." + key;
    }

    const json* find(const std::string& key, bool required)
    {
        seen_.insert(key);
        if (!node_) {
            if (required) fail(key_path(key), "missing required key");
            return nullptr;
        }
        auto it = node_->find(key);
        if (it == node_->end()) {
            if (required) fail(key_path(key), "missing required key");
            return nullptr;
        }
        return &*it;
    }

    void number(const std::string& key, double& out, bool required)
    {
        if (const json* v = find(key, required)) {
            if (v->is_number())
                out = v->get<double>();
            else
                fail(key_path(key), std::string("expected a number, got ") + type_name(*v));
        }
    }

    template <class Int>
    void integer(const std::string& key, Int& out, bool required)
    {
        if (const json* v = find(key, required)) {
            if (v->is_number_integer())
                out = v->get<Int>();
            else
                fail(key_path(key), std::string("expected an integer, got ") + type_name(*v));
        }
    }

    void boolean(const std::string& key, bool& out, bool required)
    {
        if (const json* v = find(key, required)) {
            if (v->is_boolean())
                out = v->get<bool>();
            else
                fail(key_path(key), std::string("expected true or false, got ") + type_name(*v));
        }
    }

    template <class Parse>
    void choice(const std::string& key, bool required, Parse&& parse)
    {
        if (const json* v = find(key, required)) {
            if (!v->is_string()) {
                fail(key_path(key), std::string("expected a string, got ") + type_name(*v));
                return;
            }
            try {
                parse(v->get<std::string>());
            } catch (const ConfigError& e) {
                fail(key_path(key), e.what());
            }
        }
    }

    void numbers(const std::string& key, std::vector<double>& out, bool required)
    {
        if (const json* v = find(key, required)) {
            if (!v->is_array()) {
                fail(key_path(key), std::string("expected an array, got ") + type_name(*v));
                return;
            }
            std::vector<double> values;
            for (std::size_t i = 0; i < v->size(); ++i) {
                if (!(*v)[i].is_number()) {
                    fail(key_path(key) + "[" + std::to_string(i) + "]", "expected a number");
                    return;
                }
                values.push_back((*v)[i].get<double>());
            }
            out = std::move(values);
        }
    }

    Section child(const std::string& key, bool required)
    {
        return Section(find(key, required), key_path(key), errors_);
    }

    void reject_unknown()
    {
        if (!node_) return;
        for (auto it = node_->begin(); it != node_->end(); ++it)
            if (!seen_.contains(it.key())) fail(key_path(it.key()), "unknown key");
    }

    void fail(std::string field, std::string message)
    {
        errors_.push_back({std::move(field), std::move(message)});
    }

private:
    const json* node_;
    std::string path_;
    std::vector<FieldError>& errors_;
    std::set<std::string> seen_;
};

void read_process(Section& parent, const std::string& key, ContagionParams& p, bool required)
{
    Section s = parent.child(key, required);
    if (!s.present()) return;
    s.number("lambda0", p.lambda0, required);
    s.number("delta", p.delta, required);
    s.number("eta", p.eta, required);
    s.number("sigma", p.sigma, required);
    s.number("beta", p.beta, required);
    s.reject_unknown();
}

void read_tranches(Section& root, RunConfig& cfg, bool required)
{
    const json* v = root.find("tranches", required);
    if (!v) return;
    if (!v->is_array()) {
        root.fail("tranches", "expected an array of [attach, detach] pairs");
        return;
    }
    std::vector<TrancheSpec> tranches;
    for (std::size_t i = 0; i < v->size(); ++i) {
        const json& t = (*v)[i];
        const std::string path = "tranches[" + std::to_string(i) + "]";
        if (t.is_array() && t.size() == 2 && t[0].is_number() && t[1].is_number()) {
            tranches.push_back({t[0].get<double>(), t[1].get<double>()});
        } else if (t.is_object()) {
            std::vector<FieldError> errors;
            Section s(&t, path, errors);
            TrancheSpec spec;
            s.number("attach", spec.attach, true);
            s.number("detach", spec.detach, true);
            s.reject_unknown();
            for (auto& e : errors) root.fail(e.field, e.message);
            tranches.push_back(spec);
        } else {
            root.fail(path, "expected [attach, detach] or {\"attach\": .., \"detach\": ..}");
        }
    }
    cfg.tranches = std::move(tranches);
}

json process_json(const ContagionParams& p)
{
    return {{"lambda0", p.lambda0}, {"delta", p.delta}, {"eta", p.eta}, {"sigma", p.sigma},
            {"beta", p.beta}};
}

}  // namespace

RunConfig parse_config(const json& doc)
{
    std::vector<FieldError> errors;
    Section root(&doc, "", errors);
    RunConfig cfg;
    root.boolean("base_case", cfg.base_case, false);
    const bool req = !cfg.base_case;
    if (cfg.base_case) {
        cfg.spec = base_case_portfolio();
        cfg.pricing = base_case_pricing();
        cfg.tranches = base_case_tranches();
    }

    Section model = root.child("model", req);
    if (model.present()) {
        model.integer("n_firms", cfg.spec.n_firms, req);
        model.number("recovery", cfg.spec.recovery, req);
        Section firm = model.child("firm", req);
        if (firm.present()) {
            firm.number("d", cfg.spec.firm.d, req);
            firm.number("ell", cfg.spec.firm.ell, req);
            firm.reject_unknown();
        }
        read_process(model, "idio", cfg.spec.idio, req);
        read_process(model, "common", cfg.spec.common, req);
        model.number("r", cfg.pricing.r, req);
        model.number("horizon", cfg.pricing.horizon, req);
        model.integer("payments_per_year", cfg.pricing.payments_per_year, false);
        model.choice("time_unit", false,
                     [&](const std::string& s) { cfg.pricing.time_unit = time_unit_from_string(s); });
        model.choice("rate_unit", false,
                     [&](const std::string& s) { cfg.pricing.rate_unit = time_unit_from_string(s); });
        model.reject_unknown();
    }

    read_tranches(root, cfg, req);

    Section pricing = root.child("pricing", false);
    if (pricing.present()) {
        pricing.choice("mode", false,
                       [&](const std::string& s) { cfg.mode = model_mode_from_string(s); });
        pricing.numbers("maturities", cfg.maturities, false);
        pricing.number("tail_tol", cfg.tail_tol, false);
        pricing.reject_unknown();
    }

    Section sweep = root.child("sweep", false);
    if (sweep.present()) {
        if (const json* v = sweep.find("parameters", false)) {
            if (v->is_array() && !v->empty() &&
                std::all_of(v->begin(), v->end(), [](const json& x) { return x.is_string(); })) {
                cfg.sweep.parameters = v->get<std::vector<std::string>>();
            } else {
                sweep.fail("sweep.parameters", "expected a nonempty array of parameter names");
            }
        }
        Section grids = sweep.child("grids", false);
        if (grids.present()) {
            for (const auto& name : sweep_parameter_names()) {
                std::vector<double> grid;
                grids.numbers(name, grid, false);
                if (!grid.empty()) cfg.sweep.grids[name] = grid;
                else if (grids.find(name, false)) grids.fail("sweep.grids." + name, "grid must be nonempty");
            }
            grids.reject_unknown();
        }
        sweep.numbers("maturities", cfg.sweep.maturities, false);
        sweep.reject_unknown();
        for (const auto& p : cfg.sweep.parameters) {
            const auto& names = sweep_parameter_names();
            if (std::find(names.begin(), names.end(), p) == names.end())
                sweep.fail("sweep.parameters", "unknown parameter '" + p +
                                                   "' (expected lambda0, beta, eta, w or sigma)");
        }
    }

    Section sim = root.child("simulation", false);
    if (sim.present()) {
        cfg.simulation.present = true;
        sim.integer("n_paths", cfg.simulation.mc.n_paths, false);
        sim.number("dt", cfg.simulation.mc.dt, false);
        sim.integer("seed", cfg.simulation.mc.seed, false);
        sim.choice("scheme", false,
                   [&](const std::string& s) { cfg.simulation.mc.scheme = scheme_from_string(s); });
        sim.choice("floor_policy", false, [&](const std::string& s) {
            cfg.simulation.mc.floor_policy = floor_policy_from_string(s);
        });
        sim.integer("portfolio_paths", cfg.simulation.portfolio_paths, false);
        sim.number("portfolio_dt", cfg.simulation.portfolio_dt, false);
        sim.reject_unknown();
        for (auto& e : check(cfg.simulation.mc)) errors.push_back(e);
        if (cfg.simulation.portfolio_paths < 1)
            errors.push_back({"simulation.portfolio_paths", "must be >= 1"});
        if (!(cfg.simulation.portfolio_dt > 0.0 && cfg.simulation.portfolio_dt <= 0.01))
            errors.push_back({"simulation.portfolio_dt", "must lie in (0, 0.01]"});
    }

    Section dist = root.child("dist", false);
    if (dist.present()) {
        dist.number("horizon", cfg.dist.horizon, false);
        dist.number("tail_tol", cfg.dist.tail_tol, false);
        dist.reject_unknown();
        if (!(cfg.dist.horizon >= 0.0)) errors.push_back({"dist.horizon", "must be >= 0"});
        if (!(cfg.dist.tail_tol > 0.0 && cfg.dist.tail_tol < 1.0))
            errors.push_back({"dist.tail_tol", "must lie in (0, 1)"});
    }

    Section output = root.child("output", false);
    if (output.present()) {
        if (const json* v = output.find("dir", false)) {
            if (v->is_string()) cfg.output_dir = v->get<std::string>();
            else output.fail("output.dir", "expected a string");
        }
        output.reject_unknown();
    }
    root.reject_unknown();

    if (errors.empty()) {
        for (auto& e : check(cfg.spec)) errors.push_back({"model." + e.field, e.message});
        for (auto& e : check(cfg.pricing)) errors.push_back({"model." + e.field, e.message});
        for (auto& e : check(cfg.tranches)) errors.push_back(e);
        for (std::size_t i = 0; i < cfg.maturities.size(); ++i) {
            const double periods = cfg.maturities[i] * cfg.pricing.payments_per_year;
            if (!(cfg.maturities[i] > 0.0) || std::abs(periods - std::round(periods)) > 1e-9)
                errors.push_back({"pricing.maturities[" + std::to_string(i) + "]",
                                  "must be a positive whole number of payment periods"});
        }
        if (!(cfg.tail_tol > 0.0 && cfg.tail_tol < 1e-2))
            errors.push_back({"pricing.tail_tol", "must lie in (0, 0.01)"});
    }
    if (!errors.empty()) throw ValidationError(std::move(errors));
    if (cfg.maturities.empty()) cfg.maturities = {cfg.pricing.horizon};
    if (cfg.sweep.maturities.empty()) cfg.sweep.maturities = {cfg.pricing.horizon};
    if (cfg.dist.horizon == 0.0) cfg.dist.horizon = cfg.pricing.horizon;
    for (const auto& p : cfg.sweep.parameters)
        if (!cfg.sweep.grids.contains(p)) cfg.sweep.grids[p] = default_sweep_grid(p);
    return cfg;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    json doc;
    try {
        doc = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_config(doc);
}

json RunConfig::resolved() const
{
    json tr = json::array();
    for (const auto& t : tranches) tr.push_back({t.attach, t.detach});
    json grids = json::object();
    for (const auto& [name, grid] : sweep.grids) grids[name] = grid;
    return {
        {"base_case", base_case},
        {"model",
         {{"n_firms", spec.n_firms},
          {"recovery", spec.recovery},
          {"firm", {{"d", spec.firm.d}, {"ell", spec.firm.ell}}},
          {"idio", process_json(spec.idio)},
          {"common", process_json(spec.common)},
          {"r", pricing.r},
          {"horizon", pricing.horizon},
          {"payments_per_year", pricing.payments_per_year},
          {"time_unit", to_string(pricing.time_unit)},
          {"rate_unit", to_string(pricing.rate_unit)}}},
        {"tranches", tr},
        {"pricing", {{"mode", to_string(mode)}, {"maturities", maturities}, {"tail_tol", tail_tol}}},
        {"sweep",
         {{"parameters", sweep.parameters}, {"grids", grids}, {"maturities", sweep.maturities}}},
        {"simulation",
         {{"n_paths", simulation.mc.n_paths},
          {"dt", simulation.mc.dt},
          {"seed", simulation.mc.seed},
          {"scheme", to_string(simulation.mc.scheme)},
          {"floor_policy", to_string(simulation.mc.floor_policy)},
          {"portfolio_paths", simulation.portfolio_paths},
          {"portfolio_dt", simulation.portfolio_dt}}},
        {"dist", {{"horizon", dist.horizon}, {"tail_tol", dist.tail_tol}}},
    };
}

}  // namespace cli
