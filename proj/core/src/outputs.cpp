#include "riskcap/outputs.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "riskcap/errors.hpp"
#include "riskcap/network_io.hpp"

namespace riskcap {
namespace {

using json = nlohmann::json;

json statistic_json(const backtest::Statistic& s) {
    return {{"label", s.label},         {"value", s.value},       {"std_error", s.std_error},
            {"fraction", s.fraction},   {"count", s.count},       {"reliable", s.reliable},
            {"passed", s.passed}};
}

json report_json(const backtest::BacktestReport& r) {
    json c = json::array();
    for (const auto& s : r.c) c.push_back(statistic_json(s));
    return {{"m3", r.m3}, {"multiplier", r.multiplier}, {"passed", r.passed()},
            {"a", statistic_json(r.a)}, {"b", statistic_json(r.b)}, {"c", c}};
}

// %.17g keeps every double exact on re-parse.
std::string number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string hex(std::uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

} // namespace

std::string summary_json(const RunResult& r) {
    const auto& c = r.config;
    json is = nullptr;
    if (r.is_spec) {
        std::vector<double> shift(r.is_spec->shift.data(), r.is_spec->shift.data() + r.is_spec->shift.size());
        is = {{"alpha", r.is_spec->alpha}, {"shift", shift}, {"monotonicity", r.monotonicity}};
    }
    json training = {{"epochs_run", r.history.epochs.size()},
                     {"best_epoch", r.history.best_epoch},
                     {"stopped_early", r.history.stopped_early}};
    if (r.history.best_epoch >= 1 && r.history.best_epoch <= r.history.epochs.size()) {
        const auto& best = r.history.epochs[r.history.best_epoch - 1];
        training["best_train_mse"] = best.train_mse;
        training["best_val_mse"] = best.val_mse;
    }
    json j = {
        {"model", to_string(c.model)},
        {"measure", to_string(c.measure)},
        {"alpha_var", c.alpha_var},
        {"alpha_es", c.alpha_es},
        {"var", r.var_estimate.var},
        {"es", r.es_estimate.es},
        {"var_tail_index", r.var_estimate.tail_index},
        {"es_tail_index", r.es_estimate.tail_index},
        {"mean_loss", r.mean_loss},
        {"n1", c.n1},
        {"n2", c.n2},
        {"m1", c.m1()},
        {"m2", c.m2},
        {"m3", c.m3},
        {"n_estimate", c.n_estimate},
        {"importance_sampling", is},
        {"training", training},
        {"backtest", report_json(r.backtest)},
        {"provenance", {{"config_hash", hex(r.config_hash)}, {"seed", c.seed}, {"version", r.version}}},
    };
    return j.dump(2) + "\n";
}

std::string backtest_json(const backtest::BacktestReport& report) { return report_json(report).dump(2) + "\n"; }

std::string timings_json(const std::vector<PhaseTiming>& timings) {
    json j = json::object();
    double total = 0.0;
    for (const auto& t : timings) {
        j[t.phase] = t.seconds;
        total += t.seconds;
    }
    j["total"] = total;
    return j.dump(2) + "\n";
}

std::string reference_json(std::string_view model, const models::ReferenceValues& ref) {
    json anchors = json::object();
    for (const auto& [k, v] : ref.anchors) anchors[k] = v;
    json j = {{"model", model},
              {"alpha_var", ref.alpha_var},
              {"alpha_es", ref.alpha_es},
              {"var", ref.var},
              {"es", ref.es ? json(*ref.es) : json(nullptr)},
              {"es_authoritative", ref.es_authoritative},
              {"n_ref", ref.n_ref},
              {"anchors", anchors}};
    return j.dump(2) + "\n";
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows, Measure measure) {
    std::ostringstream out;
    out << "sample_count,var,es,measure\n";
    for (const auto& r : rows) {
        out << r.sample_count << ',' << number(r.var) << ',' << number(r.es) << ',' << to_string(measure) << '\n';
    }
    return out.str();
}

std::string history_csv(const nn::TrainingHistory& history) {
    std::ostringstream out;
    out << "epoch,train_mse,val_mse\n";
    for (const auto& e : history.epochs) {
        out << e.epoch << ',' << number(e.train_mse) << ',' << number(e.val_mse) << '\n';
    }
    return out.str();
}

std::string backtest_trace_csv(const std::vector<backtest::TraceRow>& rows) {
    std::ostringstream out;
    out << "epoch,statistic,value,se\n";
    for (const auto& r : rows) {
        out << r.epoch << ',' << r.statistic << ',' << number(r.value) << ',' << number(r.std_error) << '\n';
    }
    return out.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<std::filesystem::path> emit_outputs(const RunResult& result, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());

    std::vector<std::pair<std::string, std::string>> files = {
        {"summary.json", summary_json(result)},
        {"convergence.csv", convergence_csv(result.convergence, result.config.measure)},
        {"history.csv", history_csv(result.history)},
        {"backtest.json", backtest_json(result.backtest)},
        {"network.json", nn::to_json_string(result.network)},
        {"timings.json", timings_json(result.timings)},
    };
    if (result.config.backtest_trace) files.emplace_back("backtest_trace.csv", backtest_trace_csv(result.backtest_trace));

    std::vector<std::filesystem::path> written;
    for (const auto& [name, text] : files) {
        write_text(dir / name, text);
        written.push_back(dir / name);
    }
    return written;
}

} // namespace riskcap
