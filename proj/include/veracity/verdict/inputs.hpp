#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "veracity/corpus/records.hpp"
#include "veracity/encoder/types.hpp"
#include "veracity/nn/tensor.hpp"

namespace veracity::verdict {

// One encoded (claim, evidence) pair.
struct PairInput {
    nn::Tensor tokens;                // token_count x d; may hold only the first row or be empty
    std::vector<bool> token_mask;     // empty means every token row is real
    std::vector<double> pooled;       // d, or empty when not kept
    std::array<double, 3> nli{0.0, 1.0, 0.0};  // contradiction, neutral, entailment
};

// Claim node first, then evidence nodes.
struct EvidenceGraph {
    struct Edge {
        std::size_t a = 0;
        std::size_t b = 0;
        double similarity = 0.0;
    };

    nn::Tensor features;   // (n+1) x (d+3)
    nn::Tensor adjacency;  // (n+1) x (n+1), symmetric, zero diagonal
    std::vector<Edge> edges;

    std::size_t nodes() const { return features.rows(); }
};

struct ClaimInputs {
    std::string claim_id;
    std::vector<PairInput> pairs;  // in evidence rank order
    std::optional<EvidenceGraph> graph;
};

struct Example {
    ClaimInputs inputs;
    corpus::Label label = corpus::Label::False;
};

inline std::size_t class_index(corpus::Label label) { return label == corpus::Label::True ? 1 : 0; }

std::array<double, 3> to_array(const encoder::NliTriplet& t);

// Edge (i, j) iff cosine(embedding_i, embedding_j) > threshold, over claim-evidence
// and evidence-evidence pairs. Claim features are [claim_encoding, 0, 0, 1];
// evidence features are [encoding_i, triplet_i].
EvidenceGraph build_evidence_graph(const std::vector<double>& claim_embedding,
                                   const std::vector<std::vector<double>>& evidence_embeddings,
                                   const std::vector<double>& claim_encoding,
                                   const std::vector<std::vector<double>>& evidence_encodings,
                                   const std::vector<std::array<double, 3>>& triplets, double threshold);

// The same graph with evidence nodes reordered: node 1 + i of the result is
// node 1 + order[i] of the input.
EvidenceGraph permute_evidence(const EvidenceGraph& graph, const std::vector<std::size_t>& order);

}  // namespace veracity::verdict
