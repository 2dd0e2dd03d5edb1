#include <doctest.h>

#include <filesystem>

#include <nlohmann/json.hpp>

#include "riskcap/errors.hpp"
#include "riskcap/network_io.hpp"

using namespace riskcap;
using namespace riskcap::nn;

TEST_SUITE("network_io") {

TEST_CASE("round trip is exact") {
    for (bool bn : {false, true}) {
        Architecture a{3, {4, 2}, OutputActivation::exponential, bn};
        NetworkParams p = init_params(a, 0.123456789012345, 77);
        p.input.shift << 0.1, 1.0 / 3.0, -7.25;
        p.input.scale << 2.0, 1e-3, 5.5;
        if (bn) p.layers[0].norm->running_var(1) = 0.3333333333333333;
        const NetworkParams q = from_json_string(to_json_string(p));
        CHECK(q.flatten() == p.flatten());
        CHECK(q.input.shift == p.input.shift);
        CHECK(q.input.scale == p.input.scale);
        CHECK(q.arch.hidden_sizes == a.hidden_sizes);
        CHECK(q.arch.batch_norm == bn);
        if (bn) CHECK(q.layers[0].norm->running_var == p.layers[0].norm->running_var);
        const std::vector<double> x = {0.4, -0.2, 1.1};
        CHECK(forward(q, x) == forward(p, x));
    }
}

TEST_CASE("files round trip") {
    Architecture a{1, {5}, OutputActivation::identity, false};
    const NetworkParams p = init_params(a, 1.0, 3);
    const auto path = std::filesystem::temp_directory_path() / "riskcap_net_io_test.json";
    save_network(p, path);
    CHECK(load_network(path).flatten() == p.flatten());
    std::filesystem::remove(path);
    CHECK_THROWS(load_network(path));
}

TEST_CASE("malformed documents are rejected") {
    Architecture a{2, {3}, OutputActivation::exponential, true};
    const auto good = nlohmann::json::parse(to_json_string(init_params(a, 0.0, 1)));

    auto bad_version = good;
    bad_version["version"] = 99;
    CHECK_THROWS_AS(from_json_string(bad_version.dump()), InvalidInput);

    auto bad_shape = good;
    bad_shape["layers"][0]["weights"].erase(0);
    CHECK_THROWS_AS(from_json_string(bad_shape.dump()), InvalidInput);

    auto bad_var = good;
    bad_var["layers"][0]["batch_norm"]["running_var"][0] = -1.0;
    CHECK_THROWS_AS(from_json_string(bad_var.dump()), InvalidInput);

    CHECK_THROWS_AS(from_json_string("{not json"), InvalidInput);
}

}
