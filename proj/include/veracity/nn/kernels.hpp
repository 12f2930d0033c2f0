#pragma once

#include "veracity/nn/tensor.hpp"

// Dense products used by every layer. The default versions split output rows
// across OpenMP threads; the `reference` versions are plain serial loops kept
// for testing and benchmarking. Each output element is accumulated in the same
// order in both, so results are bit-identical.
namespace veracity::nn::kernels {

// A * B
Tensor matmul(const Tensor& a, const Tensor& b);
// A^T * B
Tensor matmul_tn(const Tensor& a, const Tensor& b);
// A * B^T
Tensor matmul_nt(const Tensor& a, const Tensor& b);

namespace reference {
Tensor matmul(const Tensor& a, const Tensor& b);
Tensor matmul_tn(const Tensor& a, const Tensor& b);
Tensor matmul_nt(const Tensor& a, const Tensor& b);
}  // namespace reference

// Below this many multiply-adds the parallel versions run serially.
inline constexpr long kParallelThreshold = 1L << 15;

}  // namespace veracity::nn::kernels
