#include "riskcap/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "riskcap/errors.hpp"
#include "riskcap/rng.hpp"

namespace riskcap::nn {
namespace {

void check_sets(const NetworkParams& p, const SampleSet& train_set, const SampleSet& validation_set) {
    if (train_set.size() == 0 || validation_set.size() == 0) {
        throw InvalidInput("train: training and validation sets must be non-empty");
    }
    if (train_set.dim != p.arch.input_dim || validation_set.dim != p.arch.input_dim) {
        throw InvalidInput("train: sample dimension does not match the architecture");
    }
}

} // namespace

TrainingResult train(const Architecture& arch, const TrainingConfig& config,
                     const SampleSet& train_set, const SampleSet& validation_set,
                     const EpochObserver& observer) {
    arch.validate();
    if (train_set.size() == 0) throw InvalidInput("train: empty training set");
    NetworkParams init = init_params(arch, initial_output_bias(arch, train_set.y),
                                     derive_seed(config.seed, "init"));
    if (config.standardize_inputs) init.input = fit_input_scaling(train_set.factors());
    return train_from(std::move(init), config, train_set, validation_set, observer);
}

TrainingResult train_from(NetworkParams params, const TrainingConfig& config,
                          const SampleSet& train_set, const SampleSet& validation_set,
                          const EpochObserver& observer) {
    check_sets(params, train_set, validation_set);
    if (config.epochs == 0 || config.batch_size == 0) {
        throw InvalidInput("train: epochs and batch size must be positive");
    }

    const std::size_t n = train_set.size();
    const auto d = static_cast<Eigen::Index>(train_set.dim);
    const auto train_x = train_set.factors();
    const auto val_x = validation_set.factors();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Engine shuffle_engine(derive_seed(config.seed, "shuffle"));

    Eigen::VectorXd theta = params.flatten();
    AdamState adam(theta.size());
    std::int64_t step = 0;

    TrainingResult result;
    result.params = params;
    double best_val = std::numeric_limits<double>::infinity();
    std::size_t since_best = 0;

    Eigen::MatrixXd xb;
    Eigen::VectorXd yb;
    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), shuffle_engine);
        for (std::size_t start = 0; start < n; start += config.batch_size) {
            const std::size_t len = std::min(config.batch_size, n - start);
            xb.resize(d, static_cast<Eigen::Index>(len));
            yb.resize(static_cast<Eigen::Index>(len));
            for (std::size_t i = 0; i < len; ++i) {
                const std::size_t src = order[start + i];
                xb.col(static_cast<Eigen::Index>(i)) = train_x.col(static_cast<Eigen::Index>(src));
                yb(static_cast<Eigen::Index>(i)) = train_set.y[src];
            }
            LossGradient lg = loss_and_gradient(params, xb, yb);
            if (!lg.gradient.allFinite()) {
                throw NumericError("train: non-finite gradient in epoch " + std::to_string(epoch));
            }
            adam_step(theta, lg.gradient, adam, ++step, config.adam);
            params.assign(theta);
            update_running_moments(params, lg.moments);
        }

        EpochRecord rec;
        rec.epoch = epoch;
        rec.train_mse = mean_squared_error(params, train_x, train_set.y);
        rec.val_mse = mean_squared_error(params, val_x, validation_set.y);
        if (!std::isfinite(rec.train_mse) || !std::isfinite(rec.val_mse)) {
            throw NumericError("train: non-finite mean squared error after epoch " +
                               std::to_string(epoch));
        }
        result.history.epochs.push_back(rec);
        if (observer) observer(epoch, params);

        if (rec.val_mse < best_val) {
            best_val = rec.val_mse;
            result.params = params;
            result.history.best_epoch = epoch;
            since_best = 0;
        } else if (config.patience > 0 && ++since_best >= config.patience) {
            result.history.stopped_early = epoch < config.epochs;
            break;
        }
    }
    return result;
}

} // namespace riskcap::nn
