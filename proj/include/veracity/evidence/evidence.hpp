#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "veracity/corpus/records.hpp"
#include "veracity/encoder/client.hpp"
#include "veracity/index/analyzer.hpp"

namespace veracity::evidence {

enum class SelectionPolicy { FlatTopN, PerDocTopM };

std::string_view to_string(SelectionPolicy policy);
SelectionPolicy parse_selection_policy(std::string_view text);

struct EvidenceSentence {
    std::string text;
    std::string source_doc_id;
    std::string source_url;
    std::size_t doc_rank = 0;  // position of the source in the retrieved list
    std::size_t position = 0;  // sentence index within the source
    double similarity = 0.0;   // cosine against the claim embedding

    bool operator==(const EvidenceSentence&) const = default;
};

struct EvidenceSet {
    std::string claim_id;
    SelectionPolicy policy = SelectionPolicy::FlatTopN;
    std::vector<EvidenceSentence> sentences;  // similarity descending
};

// Texts -> embedding vectors, index-aligned.
using Embedder = std::function<std::vector<std::vector<double>>(const std::vector<std::string>& texts)>;

Embedder client_embedder(encoder::EncoderClient& client);

struct EvidenceOptions {
    // Sentences with fewer tokenizer tokens are not candidates.
    std::size_t min_tokens = 3;
    index::Analyzer analyzer{};
};

// Every candidate sentence of the ranked documents, scored against the claim.
std::vector<EvidenceSentence> score_sentence_pool(const std::string& claim_text,
                                                  const std::vector<corpus::DocumentRecord>& ranked_docs,
                                                  const Embedder& embed, const EvidenceOptions& options = {});

// Ordering used everywhere: similarity descending, then doc rank, then position.
bool ranks_before(const EvidenceSentence& a, const EvidenceSentence& b);

// Top n over the pooled sentences of all documents.
EvidenceSet retrieve_evidence_flat(const corpus::ClaimRecord& claim,
                                   const std::vector<corpus::DocumentRecord>& ranked_docs, std::size_t n,
                                   const Embedder& embed, const EvidenceOptions& options = {});

// Top per_doc sentences of each document, pooled and sorted.
EvidenceSet retrieve_evidence_per_doc(const corpus::ClaimRecord& claim,
                                      const std::vector<corpus::DocumentRecord>& ranked_docs, std::size_t per_doc,
                                      const Embedder& embed, const EvidenceOptions& options = {});

nlohmann::json to_json(const EvidenceSet& set);

}  // namespace veracity::evidence
