#include "veracity/nn/init.hpp"

#include <cmath>

namespace veracity::nn {

void glorot_uniform(Tensor& w, std::mt19937_64& rng) {
    const double limit = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (auto& v : w.values()) v = dist(rng);
}

}  // namespace veracity::nn
