#include "riskcap/experiment.hpp"

#include <chrono>
#include <cmath>
#include <map>

#include "riskcap/errors.hpp"
#include "riskcap/rng.hpp"

namespace riskcap {
namespace {

class Stopwatch {
public:
    double lap() {
        const auto now = std::chrono::steady_clock::now();
        const double s = std::chrono::duration<double>(now - last_).count();
        last_ = now;
        return s;
    }

private:
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

} // namespace

PhaseSeeds PhaseSeeds::from(std::uint64_t master) {
    return {derive_seed(master, "pilot"),      derive_seed(master, "train"),
            derive_seed(master, "validation"), derive_seed(master, "test"),
            derive_seed(master, "estimate"),   derive_seed(master, "network")};
}

risk::RiskEstimate estimate_risk(std::span<const double> losses, std::span<const double> log_weights,
                                 double alpha, const std::vector<std::size_t>& trace_counts) {
    const bool weighted = !log_weights.empty();
    if (weighted && log_weights.size() != losses.size()) {
        throw InvalidInput("estimate_risk: losses and log weights differ in length");
    }
    auto at = [&](std::size_t n) {
        if (!weighted) return risk::empirical_var_es(losses.first(n), alpha);
        const auto samples = risk::weighted_losses(losses.first(n), log_weights.first(n));
        return risk::weighted_var_es(samples, alpha);
    };
    risk::RiskEstimate est = at(losses.size());
    for (std::size_t n : trace_counts) {
        if (n == 0 || n > losses.size()) continue;
        try {
            const risk::RiskEstimate p = at(n);
            est.trace.push_back({n, p.var, p.es});
        } catch (const InsufficientTail&) {
        }
    }
    return est;
}

RunResult run_experiment(const ExperimentConfig& config) {
    config.validate();
    RunResult result;
    result.config = config;
    result.config_hash = config_hash(config);

    const auto model = make_model(config);
    const PhaseSeeds seeds = PhaseSeeds::from(config.seed);
    Stopwatch clock;

    if (config.measure == Measure::is) {
        const is::MonotonicityProfile v = model->monotonicity(seeds.pilot);
        result.monotonicity = v.signs();
        result.is_spec = is::mean_shift(model->loading(), v, config.alpha_is);
        result.timings.push_back({"pilot", clock.lap()});
    }
    const is::ISSpec* spec = result.is_spec ? &*result.is_spec : nullptr;

    const SampleSet train_set = model->simulate(config.n1, config.n2, spec, seeds.train);
    const SampleSet validation_set = model->simulate(config.m2, 1, spec, seeds.validation);
    const SampleSet test_set = model->simulate(config.m3, 1, spec, seeds.test);
    result.timings.push_back({"simulate", clock.lap()});

    nn::TrainingConfig tc = config.training;
    tc.seed = seeds.network;
    tc.n1 = config.n1;
    tc.n2 = config.n2;

    const std::vector<backtest::IndicatorSet> sets =
        backtest::quantile_sets(test_set.x, test_set.dim, config.backtest_sets);

    nn::EpochObserver observer;
    if (config.backtest_trace) {
        observer = [&](std::size_t epoch, const nn::NetworkParams& params) {
            backtest::append_trace(result.backtest_trace, epoch,
                                   backtest::run_backtest(params, test_set, sets, config.backtest_multiplier));
        };
    }
    nn::TrainingResult trained = nn::train(config.arch, tc, train_set, validation_set, observer);
    result.network = std::move(trained.params);
    result.history = std::move(trained.history);
    result.timings.push_back({"train", clock.lap()});

    result.backtest = backtest::run_backtest(result.network, test_set, sets, config.backtest_multiplier);
    result.timings.push_back({"backtest", clock.lap()});

    const SampleSet fresh = model->simulate_factors(config.n_estimate, spec, seeds.estimate);
    const Eigen::VectorXd values = nn::forward(result.network, fresh.factors(), nn::Mode::infer);
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values(i))) throw NumericError("estimate: non-finite network value");
    }
    const std::span<const double> losses(values.data(), static_cast<std::size_t>(values.size()));
    const std::vector<std::size_t> counts =
        config.trace_points == 0
            ? std::vector<std::size_t>{}
            : risk::log_spaced_counts(losses.size(), config.trace_points,
                                      std::min<std::size_t>(1000, losses.size()));
    result.var_estimate = estimate_risk(losses, fresh.log_weight, config.alpha_var, counts);
    result.es_estimate = estimate_risk(losses, fresh.log_weight, config.alpha_es, counts);

    double mean = 0.0;
    for (std::size_t i = 0; i < losses.size(); ++i) {
        mean += fresh.weighted() ? std::exp(fresh.log_weight[i]) * losses[i] : losses[i];
    }
    result.mean_loss = mean / static_cast<double>(losses.size());

    std::map<std::size_t, double> es_at;
    for (const auto& p : result.es_estimate.trace) es_at[p.n] = p.es;
    for (const auto& p : result.var_estimate.trace) {
        const auto it = es_at.find(p.n);
        if (it != es_at.end()) result.convergence.push_back({p.n, p.var, it->second});
    }
    result.timings.push_back({"estimate", clock.lap()});
    return result;
}

models::ReferenceValues run_reference(ModelId model, double alpha_var, double alpha_es,
                                      std::size_t n_ref, std::uint64_t seed) {
    switch (model) {
    case ModelId::put:
        return models::PutModel().reference(alpha_var, alpha_es, n_ref, seed);
    case ModelId::options20:
        return models::PortfolioModel().reference(alpha_var, alpha_es, n_ref, seed);
    case ModelId::va_gmib:
        return models::VaModel::reference();
    }
    throw InvalidInput("run_reference: unknown model");
}

} // namespace riskcap
