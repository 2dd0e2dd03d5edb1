#include <doctest.h>

#include <nlohmann/json.hpp>

#include "riskcap/config.hpp"
#include "riskcap/errors.hpp"

using namespace riskcap;

TEST_SUITE("config") {

TEST_CASE("model defaults") {
    const auto put = default_config(ModelId::put);
    CHECK(put.n1 == 200000);
    CHECK(put.n2 == 1);
    CHECK(put.m1() == 200000);
    CHECK(put.arch.hidden_sizes == std::vector<std::size_t>{5});
    CHECK(put.training.epochs == 40);
    CHECK(put.backtest_sets.size() == 2);
    CHECK_NOTHROW(put.validate());

    const auto opt = default_config(ModelId::options20);
    CHECK(opt.m1() == 200000);
    CHECK(opt.arch.input_dim == 20);
    CHECK(opt.arch.hidden_sizes == std::vector<std::size_t>{15, 15});
    CHECK(opt.training.epochs == 100);
    CHECK(opt.backtest_sets[0].conditions.size() == 6);

    const auto va = default_config(ModelId::va_gmib);
    CHECK(va.arch.hidden_sizes == std::vector<std::size_t>{4, 4});
    CHECK(va.arch.input_dim == 3);
    CHECK(va.m2 == 50000);
    CHECK(va.m3 == 50000);
    CHECK(va.n_estimate == 100000);
}

TEST_CASE("minimal document takes the defaults") {
    const auto c = parse_config(R"({"model": "va-gmib"})");
    CHECK(c.model == ModelId::va_gmib);
    CHECK(canonical_json(c) == canonical_json(default_config(ModelId::va_gmib)));
}

TEST_CASE("overrides are applied") {
    const auto c = parse_config(R"({
        "model": "put", "measure": "is", "alpha_var": 0.99, "n1": 1000, "m2": 10, "seed": 18446744073709551615,
        "network": {"hidden_sizes": [3, 2], "batch_norm": true, "output": "identity"},
        "training": {"epochs": 3, "learning_rate": 0.01, "patience": 0},
        "backtest": {"multiplier": 2.5, "trace": true, "sets": [{"label": "L", "conditions": [{"coordinate": 0, "side": "above", "level": 0.9}]}]},
        "model_params": {"sigma": 0.3}
    })");
    CHECK(c.measure == Measure::is);
    CHECK(c.alpha_var == 0.99);
    CHECK(c.alpha_is == 0.99);  // follows alpha_var unless given
    CHECK(c.n1 == 1000);
    CHECK(c.m2 == 10);
    CHECK(c.seed == 18446744073709551615ULL);
    CHECK(c.arch.hidden_sizes == std::vector<std::size_t>{3, 2});
    CHECK(c.arch.batch_norm);
    CHECK(c.arch.output == nn::OutputActivation::identity);
    CHECK(c.training.epochs == 3);
    CHECK(c.training.adam.learning_rate == 0.01);
    CHECK(c.training.patience == 0);
    CHECK(c.backtest_multiplier == 2.5);
    CHECK(c.backtest_trace);
    REQUIRE(c.backtest_sets.size() == 1);
    CHECK(c.backtest_sets[0].conditions[0].side == backtest::Side::above);
    CHECK(c.put.sigma == 0.3);
}

TEST_CASE("canonical json round trips") {
    for (auto id : {ModelId::put, ModelId::options20, ModelId::va_gmib}) {
        auto c = default_config(id);
        c.seed = 99;
        c.measure = Measure::is;
        const auto back = parse_config(canonical_json(c));
        CHECK(canonical_json(back) == canonical_json(c));
        CHECK(config_hash(back) == config_hash(c));
    }
}

TEST_CASE("hash identifies inputs but not the output directory") {
    auto a = default_config(ModelId::put);
    auto b = a;
    b.output_dir = "elsewhere";
    CHECK(config_hash(a) == config_hash(b));
    b.seed = a.seed + 1;
    CHECK(config_hash(a) != config_hash(b));
    b = a;
    b.put.strike = 101.0;
    CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("invalid documents raise ConfigError") {
    CHECK_THROWS_AS(parse_config("not json"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"measure": "plain"})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"model": "swaption"})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"model": "put", "alpha_var": 1.0})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"model": "put", "alpha_es": 0})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"model": "put", "n1": 0})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"model": "put", "n1": -5})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"model": "put", "m1": 5})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"model": "put", "typo": 5})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"model": "put", "training": {"epochs": "ten"}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"model": "put", "network": {"hidden_sizes": [0]}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"model": "put", "model_params": {"sigma": -1}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"model": "put", "backtest": {"sets": [{"label": "x", "conditions": []}]}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"model": "put", "backtest": {"sets": [{"label": "x", "conditions": [{"coordinate": 1, "side": "below", "level": 0.5}]}]}})"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("m1 consistent with the tree shape is accepted") {
    const auto c = parse_config(R"({"model": "options20", "n1": 100, "n2": 3, "m1": 300})");
    CHECK(c.m1() == 300);
}

TEST_CASE("model factory") {
    CHECK(make_model(default_config(ModelId::put))->id() == "put");
    CHECK(make_model(default_config(ModelId::options20))->factor_dim() == 20);
    CHECK(make_model(default_config(ModelId::va_gmib))->id() == "va-gmib");
}

}
