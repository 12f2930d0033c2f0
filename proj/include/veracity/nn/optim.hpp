#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "veracity/nn/tape.hpp"

namespace veracity::nn {

struct AdamWConfig {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 0.01;
};

struct AdamWState {
    AdamWConfig config;
    std::vector<Tensor> m;
    std::vector<Tensor> v;
    std::size_t step = 0;
};

AdamWState make_adamw_state(const std::vector<Parameter*>& params, AdamWConfig config = {});

// One decoupled-weight-decay Adam update from each Parameter::grad:
//   p <- p - lr * wd * p
//   p <- p - lr * m_hat / (sqrt(v_hat) + eps)
void adamw_step(const std::vector<Parameter*>& params, AdamWState& state, double lr);

struct StepSchedule {
    double base = 1e-3;
    std::optional<std::size_t> boundary;  // zero-based epoch at which decay starts
    double factor = 0.1;
};

double step_lr(const StepSchedule& schedule, std::size_t epoch);

}  // namespace veracity::nn
