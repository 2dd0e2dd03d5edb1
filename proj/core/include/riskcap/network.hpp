#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace riskcap::nn {

enum class OutputActivation { identity, exponential };
enum class Mode { train, infer };

// Pre-activation bound applied before exponentiating in the exponential head.
inline constexpr double kExpClamp = 30.0;
inline constexpr double kBatchNormMomentum = 0.99;
inline constexpr double kBatchNormEpsilon = 1e-3;

// Feedforward net: tanh hidden layers, scalar output through identity or exp.
struct Architecture {
    std::size_t input_dim = 1;
    std::vector<std::size_t> hidden_sizes;
    OutputActivation output = OutputActivation::exponential;
    bool batch_norm = false;

    std::size_t layer_count() const { return hidden_sizes.size() + 1; }
    std::size_t layer_inputs(std::size_t layer) const;
    std::size_t layer_outputs(std::size_t layer) const;
    // sum_j q_j (q_{j-1} + 1)
    std::size_t affine_parameter_count() const;
    void validate() const;
};

struct BatchNorm {
    Eigen::VectorXd gamma;
    Eigen::VectorXd beta;
    Eigen::VectorXd running_mean;
    Eigen::VectorXd running_var;
};

struct Layer {
    Eigen::MatrixXd weight; // q_j x q_{j-1}
    Eigen::VectorXd bias;
    std::optional<BatchNorm> norm; // hidden layers only
};

// Fixed affine map applied to raw inputs: (x - shift) / scale.
struct InputScaling {
    Eigen::VectorXd shift;
    Eigen::VectorXd scale;
};

struct NetworkParams {
    Architecture arch;
    InputScaling input;
    std::vector<Layer> layers;

    // Trainable coordinates: per layer the weights (row-major), the bias and,
    // with batch norm, the scale and shift vectors.
    std::size_t trainable_count() const;
    Eigen::VectorXd flatten() const;
    void assign(const Eigen::VectorXd& theta);
    bool all_finite() const;
};

// Xavier-uniform weights, zero hidden biases, last bias = output_bias.
// Callers pass log(mean Y) for the exponential head, mean Y for identity.
NetworkParams init_params(const Architecture& arch, double output_bias, std::uint64_t seed);

// The output bias init_params expects for this architecture and target sample.
double initial_output_bias(const Architecture& arch, std::span<const double> targets);

// Per-coordinate mean/standard deviation of the columns of x (d x n).
InputScaling fit_input_scaling(const Eigen::Ref<const Eigen::MatrixXd>& x);

// Evaluates the network on every column of x (d x n). Train mode normalizes
// with batch statistics; infer mode with the running estimates.
Eigen::VectorXd forward(const NetworkParams& params, const Eigen::Ref<const Eigen::MatrixXd>& x,
                        Mode mode = Mode::infer);

double forward(const NetworkParams& params, std::span<const double> x);

struct BatchMoments {
    Eigen::VectorXd mean;
    Eigen::VectorXd var;
};

struct LossGradient {
    double loss = 0.0;
    Eigen::VectorXd gradient;           // matches NetworkParams::flatten layout
    std::vector<BatchMoments> moments;  // one per hidden layer when batch norm is on
};

// Mean squared error of the train-mode forward pass over the batch and its
// exact gradient with respect to every trainable coordinate.
LossGradient loss_and_gradient(const NetworkParams& params,
                               const Eigen::Ref<const Eigen::MatrixXd>& x,
                               const Eigen::Ref<const Eigen::VectorXd>& y);

// Exponential moving update of the batch-norm running statistics.
void update_running_moments(NetworkParams& params, const std::vector<BatchMoments>& moments);

double mean_squared_error(const NetworkParams& params, const Eigen::Ref<const Eigen::MatrixXd>& x,
                          std::span<const double> y);

} // namespace riskcap::nn
