#include "veracity/nn/optim.hpp"

#include <cmath>

#include "veracity/error.hpp"

namespace veracity::nn {

AdamWState make_adamw_state(const std::vector<Parameter*>& params, AdamWConfig config) {
    AdamWState state;
    state.config = config;
    for (const Parameter* p : params) {
        state.m.emplace_back(p->value.rows(), p->value.cols());
        state.v.emplace_back(p->value.rows(), p->value.cols());
    }
    return state;
}

void adamw_step(const std::vector<Parameter*>& params, AdamWState& state, double lr) {
    if (params.size() != state.m.size() || params.size() != state.v.size()) {
        throw ShapeError("adamw: state tracks " + std::to_string(state.m.size()) + " parameters, got " +
                         std::to_string(params.size()));
    }
    const AdamWConfig& c = state.config;
    ++state.step;
    const double bc1 = 1.0 - std::pow(c.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(c.beta2, static_cast<double>(state.step));
    for (std::size_t i = 0; i < params.size(); ++i) {
        Parameter& p = *params[i];
        Tensor& m = state.m[i];
        Tensor& v = state.v[i];
        if (!p.value.same_shape(p.grad) || !p.value.same_shape(m) || !p.value.same_shape(v)) {
            throw ShapeError("adamw: shape mismatch for parameter '" + p.name + "'");
        }
        for (std::size_t j = 0; j < p.value.size(); ++j) {
            const double g = p.grad[j];
            m[j] = c.beta1 * m[j] + (1.0 - c.beta1) * g;
            v[j] = c.beta2 * v[j] + (1.0 - c.beta2) * g * g;
            p.value[j] *= 1.0 - lr * c.weight_decay;
            p.value[j] -= lr * (m[j] / bc1) / (std::sqrt(v[j] / bc2) + c.eps);
        }
    }
}

double step_lr(const StepSchedule& schedule, std::size_t epoch) {
    if (schedule.boundary && epoch >= *schedule.boundary) return schedule.base * schedule.factor;
    return schedule.base;
}

}  // namespace veracity::nn
