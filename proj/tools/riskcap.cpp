#include <cstdio>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "riskcap/backtest.hpp"
#include "riskcap/config.hpp"
#include "riskcap/errors.hpp"
#include "riskcap/experiment.hpp"
#include "riskcap/network_io.hpp"
#include "riskcap/outputs.hpp"
#include "riskcap/parallel.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitBacktestFailed = 2;
constexpr int kExitInvalidConfig = 3;
constexpr int kExitNumeric = 4;

struct RunOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    unsigned threads = 0;
    std::string out;
};

struct ReferenceOptions {
    std::string model;
    std::size_t n = 1000000;
    std::uint64_t seed = 1;
    double alpha_var = 0.995;
    double alpha_es = 0.99;
};

struct BacktestOptions {
    std::string params;
    std::string config;
    std::optional<std::uint64_t> seed;
    unsigned threads = 0;
};

int run(const RunOptions& o) {
    riskcap::ExperimentConfig cfg = riskcap::load_config(o.config);
    if (o.seed) cfg.seed = *o.seed;
    if (!o.out.empty()) cfg.output_dir = o.out;
    riskcap::set_max_threads(o.threads);

    const riskcap::RunResult r = riskcap::run_experiment(cfg);
    riskcap::emit_outputs(r, cfg.output_dir);

    std::printf("model %s, measure %s\n", std::string(riskcap::to_string(cfg.model)).c_str(),
                std::string(riskcap::to_string(cfg.measure)).c_str());
    std::printf("VaR %.4f = %.6f\n", cfg.alpha_var, r.var_estimate.var);
    std::printf("ES  %.4f = %.6f\n", cfg.alpha_es, r.es_estimate.es);
    std::printf("backtest %s (a = %.4g +- %.2g, b = %.4g +- %.2g)\n", r.backtest.passed() ? "passed" : "FAILED",
                r.backtest.a.value, r.backtest.a.std_error, r.backtest.b.value, r.backtest.b.std_error);
    std::printf("outputs written to %s\n", cfg.output_dir.string().c_str());
    return r.backtest.passed() ? kExitOk : kExitBacktestFailed;
}

int reference(const ReferenceOptions& o) {
    const riskcap::ModelId id = riskcap::parse_model_id(o.model);
    const auto ref = riskcap::run_reference(id, o.alpha_var, o.alpha_es, o.n, o.seed);
    std::cout << riskcap::reference_json(riskcap::to_string(id), ref);
    return kExitOk;
}

int backtest(const BacktestOptions& o) {
    riskcap::ExperimentConfig cfg = riskcap::load_config(o.config);
    if (o.seed) cfg.seed = *o.seed;
    riskcap::set_max_threads(o.threads);
    const riskcap::nn::NetworkParams net = riskcap::nn::load_network(o.params);
    if (net.arch.input_dim != cfg.arch.input_dim) {
        throw riskcap::ConfigError("network input dimension does not match the configured model");
    }

    const auto model = riskcap::make_model(cfg);
    const auto seeds = riskcap::PhaseSeeds::from(cfg.seed);
    std::optional<riskcap::is::ISSpec> spec;
    if (cfg.measure == riskcap::Measure::is) {
        spec = riskcap::is::mean_shift(model->loading(), model->monotonicity(seeds.pilot), cfg.alpha_is);
    }
    const auto test = model->simulate(cfg.m3, 1, spec ? &*spec : nullptr, seeds.test);
    const auto sets = riskcap::backtest::quantile_sets(test.x, test.dim, cfg.backtest_sets);
    const auto report = riskcap::backtest::run_backtest(net, test, sets, cfg.backtest_multiplier);
    std::cout << riskcap::backtest_json(report);
    return report.passed() ? kExitOk : kExitBacktestFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Neural-network regression estimates of value-at-risk and expected shortfall"};
    app.require_subcommand(1);
    app.set_version_flag("--version", riskcap::kVersion);

    RunOptions run_opts;
    auto* run_cmd = app.add_subcommand("run", "Simulate, train, backtest and estimate VaR/ES");
    run_cmd->add_option("--config", run_opts.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--seed", run_opts.seed, "Override the master seed");
    run_cmd->add_option("--threads", run_opts.threads, "Worker thread cap (0 = all cores)");
    run_cmd->add_option("--out", run_opts.out, "Output directory (overrides output_dir)");

    ReferenceOptions ref_opts;
    auto* ref_cmd = app.add_subcommand("reference", "Reference VaR/ES of a built-in model");
    ref_cmd->add_option("--model", ref_opts.model, "put, options20 or va-gmib")
        ->required()
        ->check(CLI::IsMember({"put", "options20", "va-gmib"}));
    ref_cmd->add_option("--n", ref_opts.n, "Number of reference draws")->check(CLI::PositiveNumber);
    ref_cmd->add_option("--seed", ref_opts.seed, "Seed of the reference draws");
    ref_cmd->add_option("--alpha-var", ref_opts.alpha_var, "VaR level")->check(CLI::Range(0.0, 1.0));
    ref_cmd->add_option("--alpha-es", ref_opts.alpha_es, "ES level")->check(CLI::Range(0.0, 1.0));

    BacktestOptions bt_opts;
    auto* bt_cmd = app.add_subcommand("backtest", "Backtest a saved network on the test sample of a config and seed");
    bt_cmd->add_option("--params", bt_opts.params, "Network JSON written by 'run'")->required()->check(CLI::ExistingFile);
    bt_cmd->add_option("--config", bt_opts.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    bt_cmd->add_option("--seed", bt_opts.seed, "Override the master seed");
    bt_cmd->add_option("--threads", bt_opts.threads, "Worker thread cap (0 = all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInvalidConfig;
    }

    try {
        if (*run_cmd) return run(run_opts);
        if (*ref_cmd) return reference(ref_opts);
        if (*bt_cmd) return backtest(bt_opts);
    } catch (const riskcap::ConfigError& e) {
        std::cerr << "invalid config: " << e.what() << '\n';
        return kExitInvalidConfig;
    } catch (const riskcap::NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
