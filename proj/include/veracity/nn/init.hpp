#pragma once

#include <random>

#include "veracity/nn/tensor.hpp"

namespace veracity::nn {

// Uniform in +-sqrt(6 / (rows + cols)).
void glorot_uniform(Tensor& w, std::mt19937_64& rng);

}  // namespace veracity::nn
