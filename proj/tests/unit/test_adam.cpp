#include <doctest.h>

#include <cmath>

#include "riskcap/adam.hpp"
#include "riskcap/errors.hpp"

using namespace riskcap;
using namespace riskcap::nn;

TEST_SUITE("adam") {

TEST_CASE("zero gradient leaves parameters and decays moments") {
    Eigen::VectorXd theta(2);
    theta << 1.0, -2.0;
    AdamState s(2);
    s.m << 0.5, 0.5;
    s.v << 0.25, 0.25;
    const Eigen::VectorXd start = theta;
    adam_step(theta, Eigen::VectorXd::Zero(2), s, 1);
    CHECK(s.m(0) == doctest::Approx(0.45));
    CHECK(s.v(0) == doctest::Approx(0.24975));
    // Moments were nonzero, so parameters still move; with a fresh state they do not.
    AdamState fresh(2);
    Eigen::VectorXd t2 = start;
    adam_step(t2, Eigen::VectorXd::Zero(2), fresh, 1);
    CHECK(t2 == start);
}

TEST_CASE("first step from zero state matches the hand recursion") {
    const double g = 0.3;
    const double lr = 0.001, b1 = 0.9, b2 = 0.999, eps = 1e-7;
    // m1 = (1-b1) g, v1 = (1-b2) g^2
    const double m1 = (1 - b1) * g;
    const double v1 = (1 - b2) * g * g;
    const double lr_t = lr * std::sqrt(1 - b2) / (1 - b1);
    const double expected = -lr_t * m1 / (std::sqrt(v1) + eps);
    CHECK(expected == doctest::Approx(-lr * g / (std::abs(g) + eps / std::sqrt(1 - b2))).epsilon(1e-12));

    Eigen::VectorXd theta = Eigen::VectorXd::Zero(1);
    AdamState s(1);
    adam_step(theta, Eigen::VectorXd::Constant(1, g), s, 1);
    CHECK(theta(0) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("constant gradient gives steps of size learning rate") {
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(3);
    AdamState s(3);
    Eigen::VectorXd g(3);
    g << 2.0, -0.5, 10.0;
    Eigen::VectorXd prev = theta;
    for (int t = 1; t <= 5000; ++t) {
        prev = theta;
        adam_step(theta, g, s, t);
    }
    const Eigen::VectorXd step = theta - prev;
    for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(step(i)) == doctest::Approx(0.001).epsilon(1e-4));
        CHECK(step(i) * g(i) < 0.0);
    }
}

TEST_CASE("bad step index or shape is rejected") {
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(2);
    AdamState s(2);
    CHECK_THROWS_AS(adam_step(theta, Eigen::VectorXd::Zero(2), s, 0), InvalidInput);
    CHECK_THROWS_AS(adam_step(theta, Eigen::VectorXd::Zero(3), s, 1), InvalidInput);
    AdamState wrong(4);
    CHECK_THROWS_AS(adam_step(theta, Eigen::VectorXd::Zero(2), wrong, 1), InvalidInput);
}

}
