#pragma once

#include <cstddef>
#include <vector>

#include "veracity/nn/tape.hpp"

namespace veracity::nn {

Var matmul(Tape& t, Var a, Var b);
Var add(Tape& t, Var a, Var b);
// x (n x c) + b (1 x c, broadcast over rows)
Var add_row(Tape& t, Var x, Var b);
// x (n x f) * W (f x c) + b (1 x c, broadcast over rows)
Var linear(Tape& t, Var x, Var w, Var b);
Var relu(Tape& t, Var x);
Var scale(Tape& t, Var x, double factor);

// axis 1 normalizes each row, axis 0 each column.
Var softmax(Tape& t, Var x, int axis = 1);

// probs: 1 x C distribution. Returns -ln probs[target] as 1x1.
Var cross_entropy(Tape& t, Var probs, std::size_t target);

// softmax(Q K^T / sqrt(d)) V. key_mask, when given, has one entry per key row;
// masked keys get zero weight and a query with no unmasked key outputs zeros.
Var scaled_dot_attention(Tape& t, Var q, Var k, Var v, const std::vector<bool>* key_mask = nullptr);

// D^-1/2 (A + I) D^-1/2 for a symmetric 0/1 adjacency with zero diagonal.
Tensor normalized_adjacency(const Tensor& adjacency);
void validate_adjacency(const Tensor& adjacency);

// D^-1/2 (A + I) D^-1/2 X W
Var gcn_layer(Tape& t, Var x, const Tensor& adjacency, Var w);

Var concat_cols(Tape& t, const std::vector<Var>& parts);
Var slice_rows(Tape& t, Var x, std::size_t begin, std::size_t end);
Var slice_cols(Tape& t, Var x, std::size_t begin, std::size_t end);
Var mean_rows(Tape& t, Var x);

}  // namespace veracity::nn
