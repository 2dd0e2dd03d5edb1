#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "riskcap/errors.hpp"
#include "riskcap/experiment.hpp"
#include "riskcap/outputs.hpp"

using namespace riskcap;

namespace {

ExperimentConfig small_put(Measure m = Measure::plain) {
    auto c = default_config(ModelId::put);
    c.measure = m;
    c.n1 = 5000;
    c.m2 = 2000;
    c.m3 = 2000;
    c.n_estimate = 20000;
    c.training.epochs = 3;
    c.training.batch_size = 500;
    c.seed = 5;
    return c;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}

TEST_SUITE("pipeline") {

TEST_CASE("phase seeds use distinct labels") {
    const auto s = PhaseSeeds::from(42);
    const std::set<std::uint64_t> all = {s.pilot, s.train, s.validation, s.test, s.estimate, s.network};
    CHECK(all.size() == 6);
}

TEST_CASE("runs are reproducible") {
    const auto a = run_experiment(small_put());
    const auto b = run_experiment(small_put());
    CHECK(summary_json(a) == summary_json(b));
    CHECK(history_csv(a.history) == history_csv(b.history));
}

TEST_CASE("changing n_estimate leaves training untouched") {
    auto c = small_put();
    const auto a = run_experiment(c);
    c.n_estimate = 7000;
    const auto b = run_experiment(c);
    CHECK(history_csv(a.history) == history_csv(b.history));
    CHECK(a.network.flatten() == b.network.flatten());
    CHECK(backtest_json(a.backtest) == backtest_json(b.backtest));
}

TEST_CASE("convergence trace is a prefix property") {
    for (auto m : {Measure::plain, Measure::is}) {
        const auto r = run_experiment(small_put(m));
        REQUIRE(!r.var_estimate.trace.empty());
        CHECK(r.var_estimate.trace.back().n == 20000);
        CHECK(r.var_estimate.trace.back().var == r.var_estimate.var);
        // Recompute one interior point from scratch on the first n samples.
        const auto model = make_model(r.config);
        const auto seeds = PhaseSeeds::from(r.config.seed);
        const auto fresh = model->simulate_factors(20000, r.is_spec ? &*r.is_spec : nullptr, seeds.estimate);
        const Eigen::VectorXd values = nn::forward(r.network, fresh.factors(), nn::Mode::infer);
        const auto& point = r.es_estimate.trace[r.es_estimate.trace.size() / 2];
        const std::span<const double> prefix(values.data(), point.n);
        const auto lw = std::span<const double>(fresh.log_weight).first(fresh.weighted() ? point.n : 0);
        const auto direct = estimate_risk(prefix, lw, r.config.alpha_es, {});
        CHECK(direct.es == point.es);
        CHECK(direct.var == r.es_estimate.trace[r.es_estimate.trace.size() / 2].var);
    }
}

TEST_CASE("estimate_risk skips prefixes with too little tail weight") {
    const std::vector<double> losses = {1, 2, 3, 4};
    const std::vector<double> lw = {-10, -10, -10, std::log(4.0)};
    const auto r = estimate_risk(losses, lw, 0.5, {1, 2, 3, 4});
    CHECK(r.trace.size() == 1);
    CHECK(r.trace[0].n == 4);
}

TEST_CASE("IS runs record the shift") {
    const auto r = run_experiment(small_put(Measure::is));
    REQUIRE(r.is_spec.has_value());
    CHECK(r.is_spec->shift(0) < 0.0);
    CHECK(r.monotonicity == std::vector<int>{-1});
}

TEST_CASE("outputs are written and parse back") {
    auto c = small_put();
    c.backtest_trace = true;
    const auto r = run_experiment(c);
    const auto dir = std::filesystem::temp_directory_path() / "riskcap_pipeline_test";
    std::filesystem::remove_all(dir);
    const auto files = emit_outputs(r, dir);
    CHECK(files.size() == 7);

    const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
    CHECK(summary["var"].get<double>() == r.var_estimate.var);
    CHECK(summary["es"].get<double>() == r.es_estimate.es);
    CHECK(summary["mean_loss"].get<double>() == r.mean_loss);
    CHECK(summary["backtest"]["a"]["value"].get<double>() == r.backtest.a.value);
    CHECK(summary["provenance"]["seed"].get<std::uint64_t>() == c.seed);
    CHECK(summary["provenance"]["config_hash"].get<std::string>().size() == 16);
    CHECK_FALSE(summary.contains("timings"));

    const auto conv = slurp(dir / "convergence.csv");
    CHECK(conv.rfind("sample_count,var,es,measure\n", 0) == 0);
    CHECK(lines(conv) == 1 + r.convergence.size());
    const auto hist = slurp(dir / "history.csv");
    CHECK(lines(hist) == 1 + r.history.epochs.size());
    const auto trace = slurp(dir / "backtest_trace.csv");
    CHECK(lines(trace) == 1 + r.history.epochs.size() * (2 + c.backtest_sets.size()));
    CHECK(nlohmann::json::parse(slurp(dir / "timings.json")).contains("train"));
    CHECK(nlohmann::json::parse(slurp(dir / "backtest.json"))["m3"] == c.m3);
    std::filesystem::remove_all(dir);
}

TEST_CASE("empty convergence trace gives a header-only csv") {
    CHECK(convergence_csv({}, Measure::plain) == "sample_count,var,es,measure\n");
}

TEST_CASE("numbers in csv output round trip exactly") {
    const std::vector<ConvergenceRow> rows = {{10, 0.1 + 0.2, 1.0 / 3.0}};
    const auto csv = convergence_csv(rows, Measure::is);
    const auto line = csv.substr(csv.find('\n') + 1);
    double var = 0.0, es = 0.0;
    std::size_t n = 0;
    char measure[8] = {};
    REQUIRE(std::sscanf(line.c_str(), "%zu,%lf,%lf,%7s", &n, &var, &es, measure) == 4);
    CHECK(var == 0.1 + 0.2);
    CHECK(es == 1.0 / 3.0);
    CHECK(std::string(measure) == "is");
}

TEST_CASE("reference dispatch") {
    const auto put = run_reference(ModelId::put, 0.995, 0.99, 10000, 1);
    CHECK(put.var == doctest::Approx(8.3356).epsilon(1e-4));
    const auto va = run_reference(ModelId::va_gmib, 0.995, 0.99, 0, 1);
    CHECK(va.var == 139.74);
    CHECK_FALSE(va.es_authoritative);
    const auto json = nlohmann::json::parse(reference_json("va-gmib", va));
    CHECK(json["es"].is_null());
    CHECK(json["anchors"]["es_network_plain"] == 141.12);
}

TEST_CASE("invalid config is rejected before simulation") {
    auto c = small_put();
    c.alpha_var = 1.5;
    CHECK_THROWS_AS(run_experiment(c), ConfigError);
}

}
