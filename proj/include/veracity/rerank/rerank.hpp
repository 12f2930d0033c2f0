#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "veracity/index/bm25.hpp"
#include "veracity/rerank/scorer.hpp"

namespace veracity::rerank {

using PassageLookup = std::function<std::string(const index::ScoredDoc&)>;

// Re-scores every candidate and stable-sorts by the new score, so equal
// scores keep first-stage order. All scores are collected before sorting. A
// scorer failure aborts the whole call with the offending pair named.
std::vector<index::ScoredDoc> rerank(const RelevanceScorer& scorer, const std::string& query,
                                     const std::vector<index::ScoredDoc>& candidates, const PassageLookup& texts);

// Passage text taken from the index's paragraph store.
std::vector<index::ScoredDoc> rerank(const RelevanceScorer& scorer, const std::string& query,
                                     const std::vector<index::ScoredDoc>& candidates,
                                     const index::InvertedIndex& index);

struct MultistageParams {
    std::size_t first_k = 100;
    std::size_t final_k = 10;
    index::Bm25Params bm25;
    std::optional<index::Rm3Params> rm3;  // expansion before the first stage
};

// BM25 (optionally RM3-expanded) top first_k, re-ranked, truncated to final_k.
// A null scorer skips re-ranking.
std::vector<index::ScoredDoc> multistage_retrieve(const index::InvertedIndex& index, const RelevanceScorer* scorer,
                                                  const std::string& query, const MultistageParams& params);

struct DocumentScore {
    std::string doc_id;
    double score = 0.0;
    std::string best_paragraph_id;
};

// Document score = max over its paragraphs; ordered by score descending, ties
// by first appearance in `ranked`.
std::vector<DocumentScore> aggregate_documents(const std::vector<index::ScoredDoc>& ranked);

}  // namespace veracity::rerank
