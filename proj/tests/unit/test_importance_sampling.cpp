#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "riskcap/errors.hpp"
#include "riskcap/importance_sampling.hpp"

using namespace riskcap;
using namespace riskcap::is;

TEST_SUITE("importance_sampling") {

TEST_CASE("mean shift points along A^T v with norm z_alpha") {
    Eigen::MatrixXd a(2, 2);
    a << 1.0, 0.0, 0.5, 2.0;
    const MonotonicityProfile v({1, -1});
    const ISSpec s = mean_shift(a, v, 0.99);
    Eigen::Vector2d dir = a.transpose() * Eigen::Vector2d(1.0, -1.0);
    dir /= dir.norm();
    const double z = oracle::quantile(0.99);
    CHECK(s.shift.norm() == doctest::Approx(z).epsilon(1e-10));
    CHECK(s.shift(0) == doctest::Approx(z * dir(0)).epsilon(1e-10));
    CHECK(s.shift(1) == doctest::Approx(z * dir(1)).epsilon(1e-10));
    CHECK(s.alpha == 0.99);
    CHECK_FALSE(s.is_identity());
}

TEST_CASE("zero direction gives the plain measure") {
    Eigen::MatrixXd a(2, 2);
    a << 1.0, 1.0, 1.0, 1.0;
    const ISSpec s = mean_shift(a, MonotonicityProfile({1, -1}), 0.99);
    CHECK(s.is_identity());
    CHECK(mean_shift(a, MonotonicityProfile({0, 0}), 0.99).is_identity());
    CHECK(no_shift(3).dim() == 3);
}

TEST_CASE("profile validation") {
    CHECK_THROWS_AS(MonotonicityProfile({1, 2}), InvalidInput);
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(2, 2);
    CHECK_THROWS_AS(mean_shift(a, MonotonicityProfile({1}), 0.99), InvalidInput);
    CHECK_THROWS_AS(mean_shift(a, MonotonicityProfile({1, 1}), 1.0), InvalidInput);
}

TEST_CASE("log weight is the log density ratio") {
    ISSpec s;
    s.shift = Eigen::Vector3d(0.3, -1.2, 2.0);
    std::mt19937_64 eng(1);
    std::normal_distribution<double> n01;
    for (int i = 0; i < 20; ++i) {
        std::vector<double> z = {n01(eng), n01(eng), n01(eng)};
        double log_f = 0.0, log_g = 0.0;
        for (int k = 0; k < 3; ++k) {
            log_f += std::log(oracle::pdf(z[k]));
            log_g += std::log(oracle::pdf(z[k] - s.shift(k)));
        }
        CHECK(log_weight(z, s) == doctest::Approx(log_f - log_g).epsilon(1e-12));
    }
}

TEST_CASE("importance weights average to one") {
    ISSpec s;
    s.shift = Eigen::Vector2d(1.5, -1.0);
    std::mt19937_64 eng(2);
    std::normal_distribution<double> n01;
    const int n = 200000;
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) {
        std::vector<double> z = {n01(eng) + s.shift(0), n01(eng) + s.shift(1)};
        w[i] = std::exp(log_weight(z, s));
    }
    const double se = std::sqrt(oracle::sample_variance(w) / n);
    CHECK(std::abs(oracle::mean(w) - 1.0) <= 3.0 * se);
}

TEST_CASE("variance criterion is smaller under the tail shift") {
    // L = z, threshold z_0.99: E_f[1{L>=t}] = 0.01 is the criterion under no shift.
    const double t = oracle::quantile(0.99);
    std::mt19937_64 eng(3);
    std::normal_distribution<double> n01;
    auto criterion = [&](double m) {
        ISSpec s;
        s.shift = Eigen::VectorXd::Constant(1, m);
        std::vector<double> z(100000), l(100000);
        for (std::size_t i = 0; i < z.size(); ++i) l[i] = z[i] = n01(eng) + m;
        return variance_criterion(z, l, s, t);
    };
    const double plain = criterion(0.0);
    CHECK(plain == doctest::Approx(0.01).epsilon(0.1));
    // Closed form for the shifted proposal: e^{m^2} Phi(-t - m).
    const double shifted = criterion(t);
    CHECK(shifted == doctest::Approx(std::exp(t * t) * oracle::cdf(-2.0 * t)).epsilon(0.05));
    CHECK(shifted < plain / 10.0);
}

TEST_CASE("spearman correlation") {
    const std::vector<double> a = {1, 2, 3, 4, 5};
    const std::vector<double> b = {10, 20, 30, 40, 50};
    const std::vector<double> c = {5, 4, 3, 2, 1};
    CHECK(spearman_correlation(a, b) == doctest::Approx(1.0));
    CHECK(spearman_correlation(a, c) == doctest::Approx(-1.0));
    // Ties use average ranks: ranks of {1,1,2} are {1.5,1.5,3}.
    const std::vector<double> t = {1, 1, 2};
    const std::vector<double> u = {1, 2, 3};
    // Pearson of {1.5,1.5,3} and {1,2,3}
    CHECK(spearman_correlation(t, u) == doctest::Approx(std::sqrt(3.0) / 2.0));
    CHECK_THROWS_AS(spearman_correlation(a, t), InvalidInput);
}

TEST_CASE("pilot monotonicity recovers signs") {
    std::mt19937_64 eng(4);
    std::normal_distribution<double> n01;
    const std::size_t n = 10000;
    std::vector<double> x(3 * n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (int k = 0; k < 3; ++k) x[3 * i + k] = n01(eng);
        y[i] = std::exp(x[3 * i]) - 2.0 * x[3 * i + 1] + 0.1 * n01(eng);
    }
    const auto v = pilot_monotonicity(x, 3, y, 0.05);
    CHECK(v.signs() == std::vector<int>{1, -1, 0});
}

}
