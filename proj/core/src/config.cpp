#include "riskcap/config.hpp"

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "riskcap/errors.hpp"
#include "riskcap/rng.hpp"

namespace riskcap {
namespace {

using json = nlohmann::json;

void check_keys(const json& obj, std::string_view where, std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) throw ConfigError(std::string(where) + ": expected an object");
    const std::set<std::string_view> keys(allowed);
    for (const auto& [key, _] : obj.items()) {
        if (!keys.contains(key)) throw ConfigError(std::string(where) + ": unknown key '" + key + "'");
    }
}

void read(const json& obj, const char* key, double& out) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
    out = v.get<double>();
}

void read(const json& obj, const char* key, std::size_t& out) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_number_unsigned()) throw ConfigError(std::string("'") + key + "' must be a non-negative integer");
    out = v.get<std::size_t>();
}

void read(const json& obj, const char* key, int& out) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) throw ConfigError(std::string("'") + key + "' must be an integer");
    out = v.get<int>();
}

void read(const json& obj, const char* key, bool& out) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_boolean()) throw ConfigError(std::string("'") + key + "' must be true or false");
    out = v.get<bool>();
}

std::string read_string(const json& obj, const char* key) {
    const json& v = obj.at(key);
    if (!v.is_string()) throw ConfigError(std::string("'") + key + "' must be a string");
    return v.get<std::string>();
}

Measure parse_measure(std::string_view s) {
    if (s == "plain") return Measure::plain;
    if (s == "is") return Measure::is;
    throw ConfigError("unknown measure '" + std::string(s) + "' (expected plain or is)");
}

nn::OutputActivation parse_output(std::string_view s) {
    if (s == "identity") return nn::OutputActivation::identity;
    if (s == "exponential") return nn::OutputActivation::exponential;
    throw ConfigError("unknown output activation '" + std::string(s) + "'");
}

backtest::Side parse_side(std::string_view s) {
    if (s == "below") return backtest::Side::below;
    if (s == "above") return backtest::Side::above;
    throw ConfigError("unknown set side '" + std::string(s) + "' (expected below or above)");
}

models::OptionKind parse_kind(std::string_view s) {
    if (s == "call") return models::OptionKind::call;
    if (s == "put") return models::OptionKind::put;
    throw ConfigError("unknown option kind '" + std::string(s) + "'");
}

models::VaInnerScheme parse_scheme(std::string_view s) {
    if (s == "pathwise") return models::VaInnerScheme::pathwise;
    if (s == "forward_measure") return models::VaInnerScheme::forward_measure;
    throw ConfigError("unknown inner scheme '" + std::string(s) + "'");
}

backtest::SetSpec set(std::string label, std::initializer_list<backtest::Condition> conditions) {
    return {std::move(label), conditions};
}

json sets_to_json(const std::vector<backtest::SetSpec>& sets) {
    json out = json::array();
    for (const auto& s : sets) {
        json conds = json::array();
        for (const auto& c : s.conditions) {
            conds.push_back({{"coordinate", c.coordinate},
                             {"side", c.side == backtest::Side::below ? "below" : "above"},
                             {"level", c.level}});
        }
        out.push_back({{"label", s.label}, {"conditions", conds}});
    }
    return out;
}

std::vector<backtest::SetSpec> sets_from_json(const json& arr) {
    if (!arr.is_array()) throw ConfigError("backtest.sets must be an array");
    std::vector<backtest::SetSpec> out;
    for (const auto& s : arr) {
        check_keys(s, "backtest set", {"label", "conditions"});
        backtest::SetSpec spec;
        spec.label = read_string(s, "label");
        if (!s.at("conditions").is_array()) throw ConfigError("set conditions must be an array");
        for (const auto& c : s.at("conditions")) {
            check_keys(c, "set condition", {"coordinate", "side", "level"});
            backtest::Condition cond;
            read(c, "coordinate", cond.coordinate);
            cond.side = parse_side(read_string(c, "side"));
            read(c, "level", cond.level);
            spec.conditions.push_back(cond);
        }
        out.push_back(std::move(spec));
    }
    return out;
}

json model_params_to_json(const ExperimentConfig& c) {
    switch (c.model) {
    case ModelId::put: {
        const auto& p = c.put;
        return {{"s0", p.s0}, {"strike", p.strike}, {"rate", p.rate}, {"drift", p.drift},
                {"sigma", p.sigma}, {"maturity", p.maturity}, {"horizon", p.horizon}};
    }
    case ModelId::options20: {
        const auto& p = c.portfolio;
        json positions = json::array();
        for (const auto& pos : p.positions) {
            positions.push_back({{"s0", pos.s0}, {"drift", pos.drift}, {"sigma", pos.sigma},
                                 {"strike", pos.strike},
                                 {"kind", pos.kind == models::OptionKind::call ? "call" : "put"}});
        }
        return {{"rate", p.rate}, {"maturity", p.maturity}, {"horizon", p.horizon},
                {"correlation", p.correlation}, {"inner_correlation", p.inner_correlation},
                {"positions", positions}};
    }
    case ModelId::va_gmib: {
        const auto& p = c.va;
        return {{"age", p.age}, {"horizon", p.horizon}, {"maturity", p.maturity},
                {"annuity_rate", p.annuity_rate}, {"q0", p.q0}, {"equity_drift", p.equity_drift},
                {"sigma_s", p.sigma_s}, {"r0", p.r0}, {"zeta", p.zeta}, {"gamma", p.gamma},
                {"sigma_r", p.sigma_r}, {"lambda", p.lambda}, {"mu0", p.mu0}, {"kappa", p.kappa},
                {"sigma_mu", p.sigma_mu}, {"rho_sr", p.rho_sr}, {"rho_smu", p.rho_smu},
                {"rho_rmu", p.rho_rmu}, {"annuity_terms", p.annuity_terms}, {"max_age", p.max_age},
                {"inner_scheme", p.inner_scheme == models::VaInnerScheme::pathwise ? "pathwise"
                                                                                  : "forward_measure"}};
    }
    }
    return {};
}

void model_params_from_json(const json& j, ExperimentConfig& c) {
    switch (c.model) {
    case ModelId::put: {
        check_keys(j, "model_params", {"s0", "strike", "rate", "drift", "sigma", "maturity", "horizon"});
        auto& p = c.put;
        read(j, "s0", p.s0);
        read(j, "strike", p.strike);
        read(j, "rate", p.rate);
        read(j, "drift", p.drift);
        read(j, "sigma", p.sigma);
        read(j, "maturity", p.maturity);
        read(j, "horizon", p.horizon);
        break;
    }
    case ModelId::options20: {
        check_keys(j, "model_params",
                   {"rate", "maturity", "horizon", "correlation", "inner_correlation", "positions"});
        auto& p = c.portfolio;
        read(j, "rate", p.rate);
        read(j, "maturity", p.maturity);
        read(j, "horizon", p.horizon);
        read(j, "correlation", p.correlation);
        read(j, "inner_correlation", p.inner_correlation);
        if (j.contains("positions")) {
            if (!j.at("positions").is_array()) throw ConfigError("positions must be an array");
            p.positions.clear();
            for (const auto& e : j.at("positions")) {
                check_keys(e, "position", {"s0", "drift", "sigma", "strike", "kind"});
                models::OptionPosition pos;
                read(e, "s0", pos.s0);
                read(e, "drift", pos.drift);
                read(e, "sigma", pos.sigma);
                read(e, "strike", pos.strike);
                if (e.contains("kind")) pos.kind = parse_kind(read_string(e, "kind"));
                p.positions.push_back(pos);
            }
        }
        break;
    }
    case ModelId::va_gmib: {
        check_keys(j, "model_params",
                   {"age", "horizon", "maturity", "annuity_rate", "q0", "equity_drift", "sigma_s", "r0",
                    "zeta", "gamma", "sigma_r", "lambda", "mu0", "kappa", "sigma_mu", "rho_sr",
                    "rho_smu", "rho_rmu", "annuity_terms", "max_age", "inner_scheme"});
        auto& p = c.va;
        read(j, "age", p.age);
        read(j, "horizon", p.horizon);
        read(j, "maturity", p.maturity);
        read(j, "annuity_rate", p.annuity_rate);
        read(j, "q0", p.q0);
        read(j, "equity_drift", p.equity_drift);
        read(j, "sigma_s", p.sigma_s);
        read(j, "r0", p.r0);
        read(j, "zeta", p.zeta);
        read(j, "gamma", p.gamma);
        read(j, "sigma_r", p.sigma_r);
        read(j, "lambda", p.lambda);
        read(j, "mu0", p.mu0);
        read(j, "kappa", p.kappa);
        read(j, "sigma_mu", p.sigma_mu);
        read(j, "rho_sr", p.rho_sr);
        read(j, "rho_smu", p.rho_smu);
        read(j, "rho_rmu", p.rho_rmu);
        read(j, "annuity_terms", p.annuity_terms);
        read(j, "max_age", p.max_age);
        if (j.contains("inner_scheme")) p.inner_scheme = parse_scheme(read_string(j, "inner_scheme"));
        break;
    }
    }
}

std::size_t model_dim(const ExperimentConfig& c) {
    switch (c.model) {
    case ModelId::put: return 1;
    case ModelId::options20: return c.portfolio.positions.size();
    case ModelId::va_gmib: return 3;
    }
    return 0;
}

json to_json(const ExperimentConfig& c) {
    const auto& t = c.training;
    return {
        {"model", to_string(c.model)},
        {"measure", to_string(c.measure)},
        {"alpha_var", c.alpha_var},
        {"alpha_es", c.alpha_es},
        {"alpha_is", c.alpha_is},
        {"n1", c.n1},
        {"n2", c.n2},
        {"m2", c.m2},
        {"m3", c.m3},
        {"n_estimate", c.n_estimate},
        {"trace_points", c.trace_points},
        {"seed", c.seed},
        {"network",
         {{"hidden_sizes", c.arch.hidden_sizes},
          {"output", c.arch.output == nn::OutputActivation::exponential ? "exponential" : "identity"},
          {"batch_norm", c.arch.batch_norm}}},
        {"training",
         {{"epochs", t.epochs},
          {"batch_size", t.batch_size},
          {"learning_rate", t.adam.learning_rate},
          {"beta1", t.adam.beta1},
          {"beta2", t.adam.beta2},
          {"epsilon", t.adam.epsilon},
          {"patience", t.patience},
          {"standardize_inputs", t.standardize_inputs}}},
        {"backtest",
         {{"multiplier", c.backtest_multiplier},
          {"trace", c.backtest_trace},
          {"sets", sets_to_json(c.backtest_sets)}}},
        {"model_params", model_params_to_json(c)},
    };
}

} // namespace

std::string_view to_string(ModelId id) {
    switch (id) {
    case ModelId::put: return "put";
    case ModelId::options20: return "options20";
    case ModelId::va_gmib: return "va-gmib";
    }
    return "?";
}

std::string_view to_string(Measure m) { return m == Measure::plain ? "plain" : "is"; }

ModelId parse_model_id(std::string_view s) {
    if (s == "put") return ModelId::put;
    if (s == "options20") return ModelId::options20;
    if (s == "va-gmib") return ModelId::va_gmib;
    throw ConfigError("unknown model '" + std::string(s) + "' (expected put, options20 or va-gmib)");
}

ExperimentConfig default_config(ModelId model) {
    using backtest::Side;
    ExperimentConfig c;
    c.model = model;
    c.arch.output = nn::OutputActivation::exponential;
    c.arch.batch_norm = false;
    c.training.batch_size = 1000;
    switch (model) {
    case ModelId::put:
        c.n1 = 200000;
        c.n2 = 1;
        c.arch.input_dim = 1;
        c.arch.hidden_sizes = {5};
        c.training.epochs = 40;
        c.backtest_sets = {set("B1", {{0, Side::below, 0.4}}), set("B2", {{0, Side::above, 0.7}})};
        break;
    case ModelId::options20:
        c.n1 = 40000;
        c.n2 = 5;
        c.arch.input_dim = 20;
        c.arch.hidden_sizes = {15, 15};
        c.training.epochs = 100;
        c.backtest_sets = {
            set("B1", {{0, Side::above, 0.2}, {1, Side::above, 0.2}, {2, Side::above, 0.2},
                       {10, Side::below, 0.8}, {11, Side::below, 0.8}, {12, Side::below, 0.8}}),
            set("B2", {{0, Side::below, 0.8}, {1, Side::below, 0.8}, {2, Side::below, 0.8},
                       {10, Side::above, 0.2}, {11, Side::above, 0.2}, {12, Side::above, 0.2}}),
        };
        break;
    case ModelId::va_gmib:
        c.n1 = 40000;
        c.n2 = 5;
        c.arch.input_dim = 3;
        c.arch.hidden_sizes = {4, 4};
        c.training.epochs = 40;
        c.backtest_sets = {set("B1", {{0, Side::above, 0.7}, {1, Side::below, 0.3}}),
                           set("B2", {{0, Side::below, 0.3}, {1, Side::above, 0.7}})};
        break;
    }
    return c;
}

void ExperimentConfig::validate() const {
    auto unit = [](double a, const char* name) {
        if (!(a > 0.0 && a < 1.0)) throw ConfigError(std::string(name) + " must lie in (0, 1)");
    };
    unit(alpha_var, "alpha_var");
    unit(alpha_es, "alpha_es");
    unit(alpha_is, "alpha_is");
    if (n1 == 0 || n2 == 0 || m2 == 0 || m3 == 0 || n_estimate == 0) {
        throw ConfigError("sample sizes n1, n2, m2, m3 and n_estimate must be >= 1");
    }
    if (training.epochs == 0 || training.batch_size == 0) {
        throw ConfigError("training.epochs and training.batch_size must be >= 1");
    }
    const auto& adam = training.adam;
    if (!(adam.learning_rate > 0.0) || !(adam.epsilon > 0.0) || !(adam.beta1 >= 0.0 && adam.beta1 < 1.0) ||
        !(adam.beta2 >= 0.0 && adam.beta2 < 1.0)) {
        throw ConfigError("training: invalid Adam hyperparameters");
    }
    if (!(backtest_multiplier > 0.0)) throw ConfigError("backtest.multiplier must be positive");
    try {
        switch (model) {
        case ModelId::put: put.validate(); break;
        case ModelId::options20: portfolio.validate(); break;
        case ModelId::va_gmib: va.validate(); break;
        }
        arch.validate();
    } catch (const InvalidInput& e) {
        throw ConfigError(e.what());
    }
    const std::size_t d = model_dim(*this);
    if (arch.input_dim != d) throw ConfigError("network input dimension does not match the model");
    for (const auto& s : backtest_sets) {
        if (s.conditions.empty()) throw ConfigError("backtest set '" + s.label + "' has no conditions");
        for (const auto& cond : s.conditions) {
            if (cond.coordinate >= d) throw ConfigError("backtest set '" + s.label + "': coordinate out of range");
            unit(cond.level, "backtest set level");
        }
    }
}

ExperimentConfig parse_config(std::string_view json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    check_keys(j, "config",
               {"model", "measure", "alpha_var", "alpha_es", "alpha_is", "n1", "n2", "m1", "m2", "m3",
                "n_estimate", "trace_points", "seed", "output_dir", "network", "training", "backtest",
                "model_params"});
    if (!j.contains("model")) throw ConfigError("config: 'model' is required");

    ExperimentConfig c = default_config(parse_model_id(read_string(j, "model")));
    try {
        if (j.contains("measure")) c.measure = parse_measure(read_string(j, "measure"));
        read(j, "alpha_var", c.alpha_var);
        read(j, "alpha_es", c.alpha_es);
        c.alpha_is = c.alpha_var;
        read(j, "alpha_is", c.alpha_is);
        read(j, "n1", c.n1);
        read(j, "n2", c.n2);
        read(j, "m2", c.m2);
        read(j, "m3", c.m3);
        read(j, "n_estimate", c.n_estimate);
        read(j, "trace_points", c.trace_points);
        if (j.contains("seed")) {
            if (!j.at("seed").is_number_unsigned()) throw ConfigError("'seed' must be a non-negative integer");
            c.seed = j.at("seed").get<std::uint64_t>();
        }
        if (j.contains("output_dir")) c.output_dir = read_string(j, "output_dir");
        if (j.contains("m1")) {
            std::size_t m1 = 0;
            read(j, "m1", m1);
            if (m1 != c.m1()) throw ConfigError("m1 must equal n1 * n2");
        }
        if (j.contains("network")) {
            const json& n = j.at("network");
            check_keys(n, "network", {"hidden_sizes", "output", "batch_norm"});
            if (n.contains("hidden_sizes")) {
                if (!n.at("hidden_sizes").is_array()) throw ConfigError("hidden_sizes must be an array");
                c.arch.hidden_sizes.clear();
                for (const auto& h : n.at("hidden_sizes")) {
                    if (!h.is_number_unsigned()) throw ConfigError("hidden_sizes entries must be positive integers");
                    c.arch.hidden_sizes.push_back(h.get<std::size_t>());
                }
            }
            if (n.contains("output")) c.arch.output = parse_output(read_string(n, "output"));
            read(n, "batch_norm", c.arch.batch_norm);
        }
        if (j.contains("training")) {
            const json& t = j.at("training");
            check_keys(t, "training",
                       {"epochs", "batch_size", "learning_rate", "beta1", "beta2", "epsilon", "patience",
                        "standardize_inputs"});
            read(t, "epochs", c.training.epochs);
            read(t, "batch_size", c.training.batch_size);
            read(t, "learning_rate", c.training.adam.learning_rate);
            read(t, "beta1", c.training.adam.beta1);
            read(t, "beta2", c.training.adam.beta2);
            read(t, "epsilon", c.training.adam.epsilon);
            read(t, "patience", c.training.patience);
            read(t, "standardize_inputs", c.training.standardize_inputs);
        }
        if (j.contains("backtest")) {
            const json& b = j.at("backtest");
            check_keys(b, "backtest", {"multiplier", "trace", "sets"});
            read(b, "multiplier", c.backtest_multiplier);
            read(b, "trace", c.backtest_trace);
            if (b.contains("sets")) c.backtest_sets = sets_from_json(b.at("sets"));
        }
        if (j.contains("model_params")) model_params_from_json(j.at("model_params"), c);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    c.arch.input_dim = model_dim(c);
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    ExperimentConfig c = parse_config(ss.str());
    return c;
}

std::string canonical_json(const ExperimentConfig& config) { return to_json(config).dump(); }

std::uint64_t config_hash(const ExperimentConfig& config) { return fnv1a(canonical_json(config)); }

std::unique_ptr<models::ScenarioModel> make_model(const ExperimentConfig& config) {
    switch (config.model) {
    case ModelId::put: return std::make_unique<models::PutModel>(config.put);
    case ModelId::options20: return std::make_unique<models::PortfolioModel>(config.portfolio);
    case ModelId::va_gmib: return std::make_unique<models::VaModel>(config.va);
    }
    throw ConfigError("unknown model");
}

} // namespace riskcap
