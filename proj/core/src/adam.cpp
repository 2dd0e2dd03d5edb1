#include "riskcap/adam.hpp"

#include <cmath>

#include "riskcap/errors.hpp"

namespace riskcap::nn {

void adam_step(Eigen::VectorXd& theta, const Eigen::VectorXd& gradient, AdamState& state,
               std::int64_t step, const AdamConfig& config) {
    if (step < 1) throw InvalidInput("adam_step: step index must be >= 1");
    if (gradient.size() != theta.size() || state.m.size() != theta.size() ||
        state.v.size() != theta.size()) {
        throw InvalidInput("adam_step: state and gradient must match the parameter vector");
    }

    state.m = config.beta1 * state.m + (1.0 - config.beta1) * gradient;
    state.v = config.beta2 * state.v + (1.0 - config.beta2) * gradient.cwiseAbs2();

    const auto t = static_cast<double>(step);
    const double lr_t = config.learning_rate * std::sqrt(1.0 - std::pow(config.beta2, t)) /
                        (1.0 - std::pow(config.beta1, t));
    theta.array() -= lr_t * state.m.array() / (state.v.array().sqrt() + config.epsilon);
}

} // namespace riskcap::nn
