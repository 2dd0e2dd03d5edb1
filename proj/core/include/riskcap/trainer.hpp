#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "riskcap/adam.hpp"
#include "riskcap/network.hpp"
#include "riskcap/sample_set.hpp"

namespace riskcap::nn {

struct TrainingConfig {
    std::size_t epochs = 40;
    std::size_t batch_size = 10000;  // the last batch of an epoch may be smaller
    AdamConfig adam;
    std::size_t patience = 5;        // epochs without validation improvement; 0 disables
    std::uint64_t seed = 0;
    std::size_t n1 = 0;              // tree shape of the training sample (informational)
    std::size_t n2 = 1;
    bool standardize_inputs = true;
};

struct EpochRecord {
    std::size_t epoch = 0;
    double train_mse = 0.0;
    double val_mse = 0.0;
};

struct TrainingHistory {
    std::vector<EpochRecord> epochs;
    std::size_t best_epoch = 0;
    bool stopped_early = false;
};

struct TrainingResult {
    NetworkParams params;  // from the best-validation epoch
    TrainingHistory history;
};

// Called after every completed epoch with the current parameters.
using EpochObserver = std::function<void(std::size_t epoch, const NetworkParams&)>;

TrainingResult train(const Architecture& arch, const TrainingConfig& config,
                     const SampleSet& train_set, const SampleSet& validation_set,
                     const EpochObserver& observer = {});

// Same loop starting from caller-supplied parameters.
TrainingResult train_from(NetworkParams initial, const TrainingConfig& config,
                          const SampleSet& train_set, const SampleSet& validation_set,
                          const EpochObserver& observer = {});

} // namespace riskcap::nn
