#pragma once

#include <string>
#include <vector>

#include "veracity/encoder/client.hpp"
#include "veracity/verdict/heads.hpp"

namespace veracity::verdict {

struct FeatureOptions {
    enum class Tokens { All, First, None };

    std::size_t pairs = 5;  // leading evidence sentences encoded as pairs
    Tokens tokens = Tokens::All;
    bool pooled = false;
    bool graph = false;
    std::size_t graph_evidence = 30;
    double graph_threshold = 0.9;

    // Only what the head reads, so full-size encoders stay affordable.
    static FeatureOptions for_head(const HeadConfig& head);
};

// Evidence is taken in the given (rank) order. Graph edges use the sentence
// embedder; node features use pooled single-text encodings.
ClaimInputs featurize(const std::string& claim_id, const std::string& claim, const std::vector<std::string>& evidence,
                      encoder::EncoderClient& client, const FeatureOptions& options);

}  // namespace veracity::verdict
