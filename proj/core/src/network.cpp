#include "riskcap/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "riskcap/errors.hpp"
#include "riskcap/rng.hpp"

namespace riskcap::nn {
namespace {

constexpr Eigen::Index kInferChunk = 8192;

Eigen::MatrixXd scale_inputs(const InputScaling& s, const Eigen::Ref<const Eigen::MatrixXd>& x) {
    return ((x.colwise() - s.shift).array().colwise() / s.scale.array()).matrix();
}

double apply_output(OutputActivation act, double o) {
    if (act == OutputActivation::identity) return o;
    return std::exp(std::clamp(o, -kExpClamp, kExpClamp));
}

// Infer-mode or train-mode pass over one block of columns, no caching.
Eigen::VectorXd forward_block(const NetworkParams& p, const Eigen::Ref<const Eigen::MatrixXd>& x,
                              Mode mode) {
    Eigen::MatrixXd h = scale_inputs(p.input, x);
    const std::size_t hidden = p.arch.hidden_sizes.size();
    for (std::size_t j = 0; j < hidden; ++j) {
        const Layer& layer = p.layers[j];
        Eigen::MatrixXd z = (layer.weight * h).colwise() + layer.bias;
        if (layer.norm) {
            Eigen::VectorXd mean, var;
            if (mode == Mode::train) {
                mean = z.rowwise().mean();
                var = (z.colwise() - mean).array().square().rowwise().mean();
            } else {
                mean = layer.norm->running_mean;
                var = layer.norm->running_var;
            }
            const Eigen::ArrayXd inv_std = (var.array() + kBatchNormEpsilon).rsqrt();
            z = (((z.colwise() - mean).array().colwise() * (inv_std * layer.norm->gamma.array()))
                     .colwise() +
                 layer.norm->beta.array())
                    .matrix();
        }
        h = z.array().tanh().matrix();
    }
    const Layer& out = p.layers.back();
    Eigen::VectorXd o = (out.weight * h).transpose();
    o.array() += out.bias(0);
    for (auto& v : o) v = apply_output(p.arch.output, v);
    return o;
}

void check_input(const NetworkParams& p, Eigen::Index rows) {
    if (static_cast<std::size_t>(rows) != p.arch.input_dim) {
        throw InvalidInput("network: input dimension " + std::to_string(rows) + " != " +
                           std::to_string(p.arch.input_dim));
    }
}

} // namespace

std::size_t Architecture::layer_inputs(std::size_t layer) const {
    return layer == 0 ? input_dim : hidden_sizes[layer - 1];
}

std::size_t Architecture::layer_outputs(std::size_t layer) const {
    return layer < hidden_sizes.size() ? hidden_sizes[layer] : 1;
}

std::size_t Architecture::affine_parameter_count() const {
    std::size_t q = 0;
    for (std::size_t j = 0; j < layer_count(); ++j) q += layer_outputs(j) * (layer_inputs(j) + 1);
    return q;
}

void Architecture::validate() const {
    if (input_dim == 0) throw InvalidInput("architecture: input_dim must be positive");
    for (auto q : hidden_sizes) {
        if (q == 0) throw InvalidInput("architecture: hidden layer sizes must be positive");
    }
}

std::size_t NetworkParams::trainable_count() const {
    std::size_t n = 0;
    for (const auto& l : layers) {
        n += static_cast<std::size_t>(l.weight.size() + l.bias.size());
        if (l.norm) n += static_cast<std::size_t>(2 * l.norm->gamma.size());
    }
    return n;
}

Eigen::VectorXd NetworkParams::flatten() const {
    Eigen::VectorXd theta(static_cast<Eigen::Index>(trainable_count()));
    Eigen::Index k = 0;
    for (const auto& l : layers) {
        for (Eigen::Index r = 0; r < l.weight.rows(); ++r)
            for (Eigen::Index c = 0; c < l.weight.cols(); ++c) theta(k++) = l.weight(r, c);
        theta.segment(k, l.bias.size()) = l.bias;
        k += l.bias.size();
        if (l.norm) {
            theta.segment(k, l.norm->gamma.size()) = l.norm->gamma;
            k += l.norm->gamma.size();
            theta.segment(k, l.norm->beta.size()) = l.norm->beta;
            k += l.norm->beta.size();
        }
    }
    return theta;
}

void NetworkParams::assign(const Eigen::VectorXd& theta) {
    if (static_cast<std::size_t>(theta.size()) != trainable_count()) {
        throw InvalidInput("NetworkParams::assign: parameter vector has wrong length");
    }
    Eigen::Index k = 0;
    for (auto& l : layers) {
        for (Eigen::Index r = 0; r < l.weight.rows(); ++r)
            for (Eigen::Index c = 0; c < l.weight.cols(); ++c) l.weight(r, c) = theta(k++);
        l.bias = theta.segment(k, l.bias.size());
        k += l.bias.size();
        if (l.norm) {
            l.norm->gamma = theta.segment(k, l.norm->gamma.size());
            k += l.norm->gamma.size();
            l.norm->beta = theta.segment(k, l.norm->beta.size());
            k += l.norm->beta.size();
        }
    }
}

bool NetworkParams::all_finite() const {
    if (!input.shift.allFinite() || !input.scale.allFinite()) return false;
    for (const auto& l : layers) {
        if (!l.weight.allFinite() || !l.bias.allFinite()) return false;
        if (l.norm) {
            if (!l.norm->gamma.allFinite() || !l.norm->beta.allFinite() ||
                !l.norm->running_mean.allFinite() || !l.norm->running_var.allFinite())
                return false;
            if ((l.norm->running_var.array() <= 0.0).any()) return false;
        }
    }
    return true;
}

NetworkParams init_params(const Architecture& arch, double output_bias, std::uint64_t seed) {
    arch.validate();
    if (!std::isfinite(output_bias)) throw InvalidInput("init_params: output bias must be finite");

    NetworkParams p;
    p.arch = arch;
    const auto d = static_cast<Eigen::Index>(arch.input_dim);
    p.input.shift = Eigen::VectorXd::Zero(d);
    p.input.scale = Eigen::VectorXd::Ones(d);

    Engine engine(seed);
    for (std::size_t j = 0; j < arch.layer_count(); ++j) {
        const auto fan_in = static_cast<Eigen::Index>(arch.layer_inputs(j));
        const auto fan_out = static_cast<Eigen::Index>(arch.layer_outputs(j));
        const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        std::uniform_real_distribution<double> xavier(-bound, bound);

        Layer layer;
        layer.weight.resize(fan_out, fan_in);
        for (Eigen::Index r = 0; r < fan_out; ++r)
            for (Eigen::Index c = 0; c < fan_in; ++c) layer.weight(r, c) = xavier(engine);
        layer.bias = Eigen::VectorXd::Zero(fan_out);
        if (arch.batch_norm && j + 1 < arch.layer_count()) {
            layer.norm = BatchNorm{Eigen::VectorXd::Ones(fan_out), Eigen::VectorXd::Zero(fan_out),
                                   Eigen::VectorXd::Zero(fan_out), Eigen::VectorXd::Ones(fan_out)};
        }
        p.layers.push_back(std::move(layer));
    }
    p.layers.back().bias(0) = output_bias;
    return p;
}

double initial_output_bias(const Architecture& arch, std::span<const double> targets) {
    if (targets.empty()) throw InvalidInput("initial_output_bias: no targets");
    const double mean =
        std::accumulate(targets.begin(), targets.end(), 0.0) / static_cast<double>(targets.size());
    if (arch.output == OutputActivation::identity) return mean;
    if (!(mean > 0.0)) {
        throw InvalidInput("initial_output_bias: exponential head needs a positive target mean");
    }
    return std::log(mean);
}

InputScaling fit_input_scaling(const Eigen::Ref<const Eigen::MatrixXd>& x) {
    if (x.cols() == 0) throw InvalidInput("fit_input_scaling: empty sample");
    InputScaling s;
    s.shift = x.rowwise().mean();
    s.scale = ((x.colwise() - s.shift).array().square().rowwise().mean()).sqrt().matrix();
    for (auto& v : s.scale) {
        if (!(v > 0.0) || !std::isfinite(v)) v = 1.0;
    }
    return s;
}

Eigen::VectorXd forward(const NetworkParams& params, const Eigen::Ref<const Eigen::MatrixXd>& x,
                        Mode mode) {
    check_input(params, x.rows());
    if (mode == Mode::train || x.cols() <= kInferChunk) return forward_block(params, x, mode);

    Eigen::VectorXd out(x.cols());
    for (Eigen::Index start = 0; start < x.cols(); start += kInferChunk) {
        const Eigen::Index len = std::min(kInferChunk, x.cols() - start);
        out.segment(start, len) = forward_block(params, x.middleCols(start, len), Mode::infer);
    }
    return out;
}

double forward(const NetworkParams& params, std::span<const double> x) {
    Eigen::Map<const Eigen::VectorXd> col(x.data(), static_cast<Eigen::Index>(x.size()));
    return forward(params, Eigen::MatrixXd(col), Mode::infer)(0);
}

LossGradient loss_and_gradient(const NetworkParams& p, const Eigen::Ref<const Eigen::MatrixXd>& x,
                               const Eigen::Ref<const Eigen::VectorXd>& y) {
    check_input(p, x.rows());
    const Eigen::Index n = x.cols();
    if (n == 0 || y.size() != n) throw InvalidInput("loss_and_gradient: empty or mismatched batch");
    const double inv_n = 1.0 / static_cast<double>(n);
    const std::size_t hidden = p.arch.hidden_sizes.size();

    // Forward pass with the intermediates backprop needs.
    std::vector<Eigen::MatrixXd> activations; // activations[j] feeds layer j
    std::vector<Eigen::MatrixXd> normalized;  // z-hat per hidden layer (batch norm only)
    std::vector<Eigen::ArrayXd> inv_stds;
    LossGradient result;
    activations.reserve(hidden + 1);
    activations.push_back(scale_inputs(p.input, x));
    normalized.resize(hidden);
    inv_stds.resize(hidden);

    for (std::size_t j = 0; j < hidden; ++j) {
        const Layer& layer = p.layers[j];
        Eigen::MatrixXd z = (layer.weight * activations.back()).colwise() + layer.bias;
        if (layer.norm) {
            BatchMoments m;
            m.mean = z.rowwise().mean();
            z.colwise() -= m.mean;
            m.var = z.array().square().rowwise().mean();
            inv_stds[j] = (m.var.array() + kBatchNormEpsilon).rsqrt();
            z = (z.array().colwise() * inv_stds[j]).matrix();
            normalized[j] = z;
            z = ((z.array().colwise() * layer.norm->gamma.array()).colwise() +
                 layer.norm->beta.array())
                    .matrix();
            result.moments.push_back(std::move(m));
        }
        activations.push_back(z.array().tanh().matrix());
    }

    const Layer& out = p.layers.back();
    Eigen::RowVectorXd pre = out.weight * activations.back();
    pre.array() += out.bias(0);
    Eigen::RowVectorXd pred(n);
    for (Eigen::Index i = 0; i < n; ++i) pred(i) = apply_output(p.arch.output, pre(i));

    const Eigen::RowVectorXd resid = pred - y.transpose();
    result.loss = resid.squaredNorm() * inv_n;
    if (!std::isfinite(result.loss)) throw NumericError("loss_and_gradient: non-finite loss");

    // Backward pass. delta is d loss / d pre-activation, one row per unit.
    Eigen::MatrixXd delta = 2.0 * inv_n * resid;
    if (p.arch.output == OutputActivation::exponential) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const bool clamped = pre(i) < -kExpClamp || pre(i) > kExpClamp;
            delta(0, i) = clamped ? 0.0 : delta(0, i) * pred(i);
        }
    }

    std::vector<Eigen::MatrixXd> grad_w(p.layers.size());
    std::vector<Eigen::VectorXd> grad_b(p.layers.size());
    std::vector<Eigen::VectorXd> grad_gamma(p.layers.size());
    std::vector<Eigen::VectorXd> grad_beta(p.layers.size());

    for (std::size_t jj = p.layers.size(); jj-- > 0;) {
        const Layer& layer = p.layers[jj];
        if (jj < hidden) {
            // delta currently holds d loss / d tanh output; move through tanh.
            delta = (delta.array() * (1.0 - activations[jj + 1].array().square())).matrix();
            if (layer.norm) {
                const Eigen::MatrixXd& zhat = normalized[jj];
                grad_gamma[jj] = (delta.array() * zhat.array()).rowwise().sum();
                grad_beta[jj] = delta.rowwise().sum();
                const Eigen::ArrayXXd dzhat = delta.array().colwise() * layer.norm->gamma.array();
                const Eigen::ArrayXd sum_dzhat = dzhat.rowwise().sum();
                const Eigen::ArrayXd sum_dzhat_zhat = (dzhat * zhat.array()).rowwise().sum();
                delta = (((dzhat - (zhat.array().colwise() * sum_dzhat_zhat) * inv_n).colwise() -
                          sum_dzhat * inv_n)
                             .colwise() *
                         inv_stds[jj])
                            .matrix();
            }
        }
        grad_w[jj] = delta * activations[jj].transpose();
        grad_b[jj] = delta.rowwise().sum();
        if (jj > 0) delta = layer.weight.transpose() * delta;
    }

    result.gradient.resize(static_cast<Eigen::Index>(p.trainable_count()));
    Eigen::Index k = 0;
    for (std::size_t j = 0; j < p.layers.size(); ++j) {
        const auto& g = grad_w[j];
        for (Eigen::Index r = 0; r < g.rows(); ++r)
            for (Eigen::Index c = 0; c < g.cols(); ++c) result.gradient(k++) = g(r, c);
        result.gradient.segment(k, grad_b[j].size()) = grad_b[j];
        k += grad_b[j].size();
        if (p.layers[j].norm) {
            result.gradient.segment(k, grad_gamma[j].size()) = grad_gamma[j];
            k += grad_gamma[j].size();
            result.gradient.segment(k, grad_beta[j].size()) = grad_beta[j];
            k += grad_beta[j].size();
        }
    }
    return result;
}

void update_running_moments(NetworkParams& params, const std::vector<BatchMoments>& moments) {
    std::size_t m = 0;
    for (auto& layer : params.layers) {
        if (!layer.norm) continue;
        if (m >= moments.size()) throw InvalidInput("update_running_moments: missing moments");
        auto& bn = *layer.norm;
        bn.running_mean = kBatchNormMomentum * bn.running_mean + (1.0 - kBatchNormMomentum) * moments[m].mean;
        bn.running_var = kBatchNormMomentum * bn.running_var + (1.0 - kBatchNormMomentum) * moments[m].var;
        ++m;
    }
}

double mean_squared_error(const NetworkParams& params, const Eigen::Ref<const Eigen::MatrixXd>& x,
                          std::span<const double> y) {
    if (static_cast<std::size_t>(x.cols()) != y.size() || y.empty()) {
        throw InvalidInput("mean_squared_error: empty or mismatched sample");
    }
    const Eigen::VectorXd pred = forward(params, x, Mode::infer);
    double sum = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double r = pred(static_cast<Eigen::Index>(i)) - y[i];
        sum += r * r;
    }
    return sum / static_cast<double>(y.size());
}

} // namespace riskcap::nn
