#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <ostream>
#include <vector>

#include "veracity/nn/optim.hpp"
#include "veracity/verdict/heads.hpp"

namespace veracity::verdict {

struct TrainConfig {
    std::size_t epochs = 100;
    std::size_t batch_size = 30;
    nn::StepSchedule lr{1e-4, std::nullopt, 0.1};
    nn::AdamWConfig adamw{};
    // Evaluate per-example gradients of a batch across OpenMP threads. The
    // reduction order is fixed, so both settings give identical parameters.
    bool parallel = true;

    // Training settings per head: epochs, learning rate, step decay.
    static TrainConfig defaults(HeadKind kind);
    void validate() const;
    nlohmann::json to_json() const;
};

struct TrainResult {
    std::vector<double> epoch_loss;  // mean cross-entropy over each epoch's examples
    std::size_t steps = 0;
};

// Called after every epoch with (epoch, mean loss).
using EpochCallback = std::function<void(std::size_t, double)>;

TrainResult train(Head& head, const std::vector<Example>& data, const TrainConfig& config, std::uint64_t seed,
                  const EpochCallback& on_epoch = {});

// Mean cross-entropy of the head over a dataset.
double mean_loss(const Head& head, const std::vector<Example>& data);

}  // namespace veracity::verdict
