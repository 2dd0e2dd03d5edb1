#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "riskcap/black_scholes.hpp"
#include "riskcap/errors.hpp"
#include "riskcap/portfolio_model.hpp"
#include "riskcap/put_model.hpp"

using namespace riskcap;
using namespace riskcap::models;

namespace {

// Mean and standard error of n payoff draws at a fixed factor value.
oracle::McEstimate payoff_mean(const ScenarioModel& m, const std::vector<double>& x, std::size_t n,
                               std::uint64_t seed) {
    Rng inner(seed);
    std::vector<double> y(n);
    for (auto& v : y) v = m.payoff(x, inner);
    return {oracle::mean(y), std::sqrt(oracle::sample_variance(y) / static_cast<double>(n))};
}

}

TEST_SUITE("models") {

TEST_CASE("Black-Scholes prices match quadrature") {
    for (double s : {80.0, 100.0, 120.0}) {
        for (double sigma : {0.1, 0.3}) {
            const double t = 0.5, k = 100.0, r = 0.02;
            CHECK(bs_price(OptionKind::put, s, k, r, sigma, t) ==
                  doctest::Approx(oracle::put_by_quadrature(s, k, r, sigma, t)).epsilon(1e-8));
            CHECK(bs_price(OptionKind::call, s, k, r, sigma, t) ==
                  doctest::Approx(oracle::call_by_quadrature(s, k, r, sigma, t)).epsilon(1e-8));
            // put-call parity
            CHECK(bs_price(OptionKind::call, s, k, r, sigma, t) - bs_price(OptionKind::put, s, k, r, sigma, t) ==
                  doctest::Approx(s - k * std::exp(-r * t)).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(bs_price(OptionKind::put, -1.0, 100.0, 0.01, 0.2, 1.0), InvalidInput);
    CHECK_THROWS_AS(bs_price(OptionKind::put, 100.0, 100.0, 0.01, 0.0, 1.0), InvalidInput);
}

TEST_CASE("put model factors and payoffs") {
    PutModel m;
    const auto& p = m.params();
    CHECK(m.factor_dim() == 1);
    CHECK(m.loading()(0, 0) == doctest::Approx(p.sigma * std::sqrt(p.horizon)));
    CHECK(m.monotonicity(0).signs() == std::vector<int>{-1});

    std::vector<double> x(1);
    m.factors(std::vector<double>{0.0}, x);
    CHECK(x[0] == doctest::Approx(p.s0 * std::exp((p.drift - 0.5 * p.sigma * p.sigma) * p.horizon)));

    for (double s : {90.0, 100.0, 108.0}) {
        const std::vector<double> xs = {s};
        const double exact = oracle::put_by_quadrature(s, p.strike, p.rate, p.sigma, p.maturity - p.horizon);
        CHECK(*m.conditional_value(xs) == doctest::Approx(exact).epsilon(1e-8));
        const auto mc = payoff_mean(m, xs, 200000, 5);
        CHECK(std::abs(mc.mean - exact) <= 3.0 * mc.std_error);
    }
    // 0.5% quantile of S_tau maps to the reference VaR
    const double s_low = m.horizon_quantile(0.005);
    CHECK(s_low == doctest::Approx(p.s0 * std::exp((p.drift - 0.5 * p.sigma * p.sigma) * p.horizon +
                                                   p.sigma * std::sqrt(p.horizon) * oracle::quantile(0.005)))
                       .epsilon(1e-10));
}

TEST_CASE("put reference values") {
    const auto ref = PutModel().reference(0.995, 0.99, 200000, 3);
    CHECK(ref.var == doctest::Approx(8.3356).epsilon(1e-4));
    REQUIRE(ref.es.has_value());
    CHECK(*ref.es == doctest::Approx(8.509).epsilon(0.01));
    CHECK(ref.es_authoritative);
}

TEST_CASE("put simulation under IS shifts the factor and weights it") {
    PutModel m;
    const auto spec = is::mean_shift(m.loading(), m.monotonicity(0), 0.99);
    CHECK(spec.shift(0) == doctest::Approx(-oracle::quantile(0.99)).epsilon(1e-10));
    const auto s = m.simulate(20000, 1, &spec, 4);
    REQUIRE(s.weighted());
    double low = 0.0;
    for (double x : s.x) low += x < m.horizon_quantile(0.01);
    CHECK(low / 20000.0 > 0.4);
    double w = 0.0;
    for (double lw : s.log_weight) w += std::exp(lw);
    CHECK(w / 20000.0 == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("tree sampling repeats each factor draw") {
    PutModel m;
    const auto s = m.simulate(100, 5, nullptr, 8);
    CHECK(s.size() == 500);
    for (std::size_t i = 0; i < 100; ++i)
        for (std::size_t j = 1; j < 5; ++j) CHECK(s.x[i * 5 + j] == s.x[i * 5]);
    CHECK(s.y[0] != s.y[1]);
    const auto f = m.simulate_factors(100, nullptr, 8);
    CHECK(f.y.empty());
    CHECK(f.size() == 100);
    CHECK(f.x[7] == s.x[7 * 5]);
}

TEST_CASE("standard portfolio layout") {
    const auto p = PortfolioParams::standard();
    REQUIRE(p.positions.size() == 20);
    CHECK(p.positions[0].kind == OptionKind::call);
    CHECK(p.positions[10].kind == OptionKind::put);
    CHECK(p.positions[0].drift == doctest::Approx(0.03));
    CHECK(p.positions[9].drift == doctest::Approx(0.075));
    CHECK(p.positions[0].sigma == doctest::Approx(0.15));
    CHECK(p.positions[19].sigma == doctest::Approx(0.24));
    CHECK(p.positions[12].sigma == p.positions[2].sigma);
}

TEST_CASE("portfolio loading reproduces the factor covariance") {
    PortfolioModel m;
    const auto& a = m.loading();
    const Eigen::MatrixXd cov = a * a.transpose();
    const auto& p = m.params();
    for (int i = 0; i < 20; ++i) {
        for (int j = 0; j < 20; ++j) {
            const double rho = i == j ? 1.0 : p.correlation;
            CHECK(cov(i, j) == doctest::Approx(rho * p.positions[i].sigma * p.positions[j].sigma * p.horizon).epsilon(1e-12));
        }
    }
    const auto v = m.monotonicity(0).signs();
    for (int i = 0; i < 20; ++i) CHECK(v[i] == (i < 10 ? 1 : -1));
}

TEST_CASE("portfolio payoff is unbiased for the sum of option values") {
    PortfolioModel m;
    const auto& p = m.params();
    std::vector<double> x(20);
    for (int i = 0; i < 20; ++i) x[i] = 95.0 + i * 0.5;
    double exact = 0.0;
    for (int i = 0; i < 20; ++i) {
        const auto& pos = p.positions[i];
        const double t = p.maturity - p.horizon;
        exact += pos.kind == OptionKind::call ? oracle::call_by_quadrature(x[i], pos.strike, p.rate, pos.sigma, t)
                                              : oracle::put_by_quadrature(x[i], pos.strike, p.rate, pos.sigma, t);
    }
    CHECK(*m.conditional_value(x) == doctest::Approx(exact).epsilon(1e-8));
    const auto mc = payoff_mean(m, x, 100000, 6);
    CHECK(std::abs(mc.mean - exact) <= 3.0 * mc.std_error);
}

TEST_CASE("model parameter validation") {
    PutParams bad;
    bad.horizon = 1.0;
    CHECK_THROWS_AS(PutModel{bad}, InvalidInput);
    PortfolioParams pp = PortfolioParams::standard();
    pp.correlation = -0.5;
    CHECK_THROWS_AS(PortfolioModel{pp}, InvalidInput);
    pp = PortfolioParams::standard();
    pp.positions.clear();
    CHECK_THROWS_AS(PortfolioModel{pp}, InvalidInput);
}

}
