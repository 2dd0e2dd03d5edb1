#pragma once

#include <cstdint>

#include <Eigen/Core>

namespace riskcap::nn {

struct AdamConfig {
    double learning_rate = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-7;
};

struct AdamState {
    Eigen::VectorXd m;
    Eigen::VectorXd v;

    AdamState() = default;
    explicit AdamState(Eigen::Index n) : m(Eigen::VectorXd::Zero(n)), v(Eigen::VectorXd::Zero(n)) {}
};

// One Adam update in the form TensorFlow uses, with the bias correction folded
// into the step size:
//   lr_t  = lr * sqrt(1 - beta2^t) / (1 - beta1^t)
//   theta -= lr_t * m / (sqrt(v) + epsilon)
// step is the 1-based update index t.
void adam_step(Eigen::VectorXd& theta, const Eigen::VectorXd& gradient, AdamState& state,
               std::int64_t step, const AdamConfig& config = {});

} // namespace riskcap::nn
