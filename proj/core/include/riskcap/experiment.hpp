#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "riskcap/backtest.hpp"
#include "riskcap/config.hpp"
#include "riskcap/importance_sampling.hpp"
#include "riskcap/network.hpp"
#include "riskcap/risk_measures.hpp"
#include "riskcap/trainer.hpp"

namespace riskcap {

inline constexpr const char* kVersion = "0.1.0";

struct PhaseTiming {
    std::string phase;
    double seconds = 0.0;
};

struct ConvergenceRow {
    std::size_t sample_count = 0;
    double var = 0.0;
    double es = 0.0;
};

struct RunResult {
    ExperimentConfig config;
    std::uint64_t config_hash = 0;
    std::string version = kVersion;

    std::optional<is::ISSpec> is_spec;
    std::vector<int> monotonicity;

    nn::NetworkParams network;
    nn::TrainingHistory history;
    backtest::BacktestReport backtest;
    std::vector<backtest::TraceRow> backtest_trace;

    risk::RiskEstimate var_estimate;  // evaluated at alpha_var
    risk::RiskEstimate es_estimate;   // evaluated at alpha_es
    double mean_loss = 0.0;           // weighted mean of l(X) over the estimation sample
    std::vector<ConvergenceRow> convergence;

    std::vector<PhaseTiming> timings;
};

// Phase seeds, derived from the master seed by fixed labels.
struct PhaseSeeds {
    std::uint64_t pilot, train, validation, test, estimate, network;
    static PhaseSeeds from(std::uint64_t master);
};

// Simulates training, validation and test samples, trains the network,
// backtests it and estimates VaR and ES on fresh factor draws.
RunResult run_experiment(const ExperimentConfig& config);

// VaR/ES at alpha from the network values on the given factor sample, with a
// trace over log-spaced prefixes. IS weights are renormalized by the prefix
// length at every trace point.
risk::RiskEstimate estimate_risk(std::span<const double> losses, std::span<const double> log_weights,
                                 double alpha, const std::vector<std::size_t>& trace_counts);

// VaR at alpha_var and ES at alpha_es for a scenario model. Closed-form or
// Monte Carlo where available, published constants for va-gmib.
models::ReferenceValues run_reference(ModelId model, double alpha_var, double alpha_es,
                                      std::size_t n_ref, std::uint64_t seed);

} // namespace riskcap
