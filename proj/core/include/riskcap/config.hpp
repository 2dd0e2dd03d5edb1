#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "riskcap/backtest.hpp"
#include "riskcap/network.hpp"
#include "riskcap/portfolio_model.hpp"
#include "riskcap/put_model.hpp"
#include "riskcap/trainer.hpp"
#include "riskcap/va_model.hpp"

namespace riskcap {

enum class ModelId { put, options20, va_gmib };
enum class Measure { plain, is };

std::string_view to_string(ModelId id);
std::string_view to_string(Measure m);
ModelId parse_model_id(std::string_view s);  // throws ConfigError

struct ExperimentConfig {
    ModelId model = ModelId::put;
    Measure measure = Measure::plain;
    double alpha_var = 0.995;
    double alpha_es = 0.99;
    double alpha_is = 0.995;  // level the IS mean shift targets

    std::size_t n1 = 200000;  // outer draws of the training sample
    std::size_t n2 = 1;       // payoffs per outer draw
    std::size_t m2 = 50000;   // validation pairs
    std::size_t m3 = 50000;   // backtest pairs
    std::size_t n_estimate = 100000;
    std::size_t trace_points = 20;

    nn::Architecture arch;
    nn::TrainingConfig training;

    double backtest_multiplier = backtest::kDefaultMultiplier;
    bool backtest_trace = false;
    std::vector<backtest::SetSpec> backtest_sets;

    models::PutParams put;
    models::PortfolioParams portfolio = models::PortfolioParams::standard();
    models::VaParams va;

    std::filesystem::path output_dir = "riskcap-out";
    std::uint64_t seed = 1;

    std::size_t m1() const { return n1 * n2; }
    void validate() const;  // throws ConfigError
};

// Desk-scale settings for each built-in experiment.
ExperimentConfig default_config(ModelId model);

// Keys absent from the document keep the model defaults. Unknown keys are
// rejected so that typos do not silently fall back to defaults.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

// Canonical JSON of every input that affects results (output_dir excluded).
std::string canonical_json(const ExperimentConfig& config);
// FNV-1a of the canonical JSON.
std::uint64_t config_hash(const ExperimentConfig& config);

std::unique_ptr<models::ScenarioModel> make_model(const ExperimentConfig& config);

} // namespace riskcap
