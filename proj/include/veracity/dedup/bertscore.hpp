#pragma once

#include <vector>

#include "veracity/dedup/dedup.hpp"
#include "veracity/encoder/client.hpp"

namespace veracity::dedup {

using TokenVectors = std::vector<std::vector<double>>;

// Greedy-matching F1 over token embeddings: P averages, over candidate tokens,
// the best cosine against any reference token; R is the mirror image;
// F1 = 2PR / (P + R), then rescaled as (F1 - baseline) / (1 - baseline).
double bertscore_f1(const TokenVectors& candidate, const TokenVectors& reference, double baseline);

// Token rows of an encoder output as separate vectors.
TokenVectors token_rows(const encoder::PairEncoding& encoding);

// Pair scorer for similarity_stats backed by single-text encodings.
PairScore bertscore_pair_score(encoder::EncoderClient& client, double baseline);

}  // namespace veracity::dedup
