#pragma once

#include <functional>
#include <vector>

#include "veracity/nn/tape.hpp"

namespace veracity::nn {

struct GradCheckResult {
    double max_rel_error = 0.0;
    std::size_t worst_input = 0;
    std::size_t worst_index = 0;
};

// Compares tape gradients to central differences coordinate by coordinate.
// Error per coordinate is |analytic - numeric| / max(1, |numeric|).
using InputFunction = std::function<Var(Tape&, const std::vector<Var>&)>;
GradCheckResult grad_check(const InputFunction& f, std::vector<Tensor> inputs, double h = 1e-5);

// Same, perturbing parameter values in place (restored afterwards).
using ParameterFunction = std::function<Var(Tape&)>;
GradCheckResult grad_check(const ParameterFunction& f, const std::vector<Parameter*>& params, double h = 1e-5);

}  // namespace veracity::nn
