#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "riskcap/backtest.hpp"
#include "riskcap/experiment.hpp"
#include "riskcap/scenario_model.hpp"

namespace riskcap {

// Scalars and provenance of a run. Contains no timings, so identical inputs
// give byte-identical text.
std::string summary_json(const RunResult& result);
std::string backtest_json(const backtest::BacktestReport& report);
std::string timings_json(const std::vector<PhaseTiming>& timings);
std::string reference_json(std::string_view model, const models::ReferenceValues& ref);

// sample_count,var,es,measure
std::string convergence_csv(const std::vector<ConvergenceRow>& rows, Measure measure);
// epoch,train_mse,val_mse
std::string history_csv(const nn::TrainingHistory& history);
// epoch,statistic,value,se
std::string backtest_trace_csv(const std::vector<backtest::TraceRow>& rows);

// Writes summary.json, convergence.csv, history.csv, backtest.json,
// network.json and timings.json (plus backtest_trace.csv when traced) into
// dir, creating it if needed. Returns the paths written.
std::vector<std::filesystem::path> emit_outputs(const RunResult& result, const std::filesystem::path& dir);

void write_text(const std::filesystem::path& path, const std::string& text);

} // namespace riskcap
