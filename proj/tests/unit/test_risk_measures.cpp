#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "riskcap/errors.hpp"
#include "riskcap/risk_measures.hpp"

using namespace riskcap;
using namespace riskcap::risk;

TEST_SUITE("risk_measures") {

TEST_CASE("hand computed ten point example") {
    const std::vector<double> l = {3, 7, 1, 10, 5, 9, 2, 8, 4, 6};
    auto r = empirical_var_es(l, 0.8);
    CHECK(r.tail_index == 3);
    CHECK(r.var == 8.0);
    CHECK(r.es == doctest::Approx(9.5).epsilon(1e-14));
    r = empirical_var_es(l, 0.75);
    CHECK(r.var == 8.0);
    CHECK(r.es == doctest::Approx(9.2).epsilon(1e-14));
}

TEST_CASE("matches the tail integral oracle on random samples") {
    std::mt19937_64 eng(1);
    std::normal_distribution<double> n01;
    for (std::size_t n : {1u, 7u, 100u, 1001u}) {
        std::vector<double> l(n);
        for (auto& v : l) v = n01(eng);
        for (double alpha : {0.0001, 0.5, 0.9, 0.99, 0.995}) {
            if (n * (1 - alpha) < 1e-9) continue;
            const auto r = empirical_var_es(l, alpha);
            const auto o = oracle::tail_integral_uniform(l, alpha);
            CHECK(r.var == o.var);
            CHECK(r.es == doctest::Approx(o.es).epsilon(1e-12));
        }
    }
}

TEST_CASE("weighted estimator matches the oracle") {
    std::mt19937_64 eng(2);
    std::normal_distribution<double> n01;
    std::uniform_real_distribution<double> u(0.1, 2.0);
    std::vector<LossSample> s(500);
    std::vector<std::pair<double, double>> lw;
    double total = 0.0;
    for (auto& x : s) {
        x = {n01(eng), u(eng)};
        total += x.weight;
    }
    for (auto& x : s) {
        x.weight /= total;
        lw.emplace_back(x.loss, x.weight);
    }
    for (double alpha : {0.5, 0.95, 0.99}) {
        const auto r = weighted_var_es(s, alpha);
        const auto o = oracle::tail_integral(lw, alpha);
        CHECK(r.var == o.var);
        CHECK(r.es == doctest::Approx(o.es).epsilon(1e-12));
    }
}

TEST_CASE("uniform weights are bitwise equal to the plain estimator") {
    std::mt19937_64 eng(3);
    std::lognormal_distribution<double> ln;
    std::vector<double> l(10007);
    for (auto& v : l) v = ln(eng);
    std::vector<LossSample> s;
    for (double v : l) s.push_back({v, 1.0 / static_cast<double>(l.size())});
    for (double alpha : {0.9, 0.99, 0.995}) {
        const auto a = empirical_var_es(l, alpha);
        const auto b = weighted_var_es(s, alpha);
        CHECK(a.var == b.var);
        CHECK(a.es == b.es);
        CHECK(a.tail_index == b.tail_index);
    }
}

TEST_CASE("ES dominates VaR and both are monotone in alpha") {
    std::mt19937_64 eng(4);
    std::normal_distribution<double> n01;
    std::vector<double> l(5000);
    for (auto& v : l) v = n01(eng);
    double prev_var = -INFINITY, prev_es = -INFINITY;
    for (double alpha : {0.5, 0.8, 0.9, 0.95, 0.99, 0.999}) {
        const auto r = empirical_var_es(l, alpha);
        CHECK(r.es >= r.var);
        CHECK(r.var >= prev_var);
        CHECK(r.es >= prev_es);
        prev_var = r.var;
        prev_es = r.es;
    }
}

TEST_CASE("translation and scaling") {
    std::vector<double> l = {1, 5, 2, 8, 3, 9, 4, 0.5};
    const auto base = empirical_var_es(l, 0.7);
    std::vector<double> moved;
    for (double v : l) moved.push_back(3.0 * v + 2.0);
    const auto r = empirical_var_es(moved, 0.7);
    CHECK(r.var == doctest::Approx(3.0 * base.var + 2.0));
    CHECK(r.es == doctest::Approx(3.0 * base.es + 2.0));
}

TEST_CASE("insufficient tail and bad input") {
    const std::vector<LossSample> s = {{1.0, 0.001}, {2.0, 0.002}};
    CHECK_THROWS_AS(weighted_var_es(s, 0.99), InsufficientTail);
    CHECK_THROWS_AS(empirical_var_es(std::vector<double>{}, 0.9), InvalidInput);
    CHECK_THROWS_AS(empirical_var_es(std::vector<double>{1.0}, 1.0), InvalidInput);
    CHECK_THROWS_AS(empirical_var_es(std::vector<double>{1.0}, 0.0), InvalidInput);
    CHECK_THROWS_AS(weighted_var_es(std::vector<LossSample>{{1.0, -1.0}}, 0.5), InvalidInput);
}

TEST_CASE("exceedance probability") {
    const std::vector<LossSample> s = {{1.0, 0.25}, {2.0, 0.25}, {3.0, 0.25}, {4.0, 0.25}};
    const auto e = exceedance_probability(s, 3.0);
    CHECK(e.estimate == doctest::Approx(0.5));
    // summands n w 1{L >= 3} = {0, 0, 1, 1}: sd = sqrt(1/3), se = sd / 2
    CHECK(e.std_error == doctest::Approx(std::sqrt(1.0 / 3.0) / 2.0));
}

TEST_CASE("weighted_losses normalizes by sample count") {
    const std::vector<double> l = {1.0, 2.0};
    const std::vector<double> lw = {0.0, std::log(3.0)};
    const auto s = weighted_losses(l, lw);
    CHECK(s[0].weight == doctest::Approx(0.5));
    CHECK(s[1].weight == doctest::Approx(1.5));
    CHECK_THROWS_AS(weighted_losses(l, std::vector<double>{0.0}), InvalidInput);
}

TEST_CASE("log spaced counts") {
    const auto c = log_spaced_counts(100000, 20, 1000);
    CHECK(c.front() == 1000);
    CHECK(c.back() == 100000);
    for (std::size_t i = 1; i < c.size(); ++i) CHECK(c[i] > c[i - 1]);
    CHECK(c.size() == 20);
    CHECK(log_spaced_counts(500, 10, 1000) == std::vector<std::size_t>{500});
    CHECK(log_spaced_counts(0, 10).empty());
}

}
