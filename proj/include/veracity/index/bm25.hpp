#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "veracity/index/inverted_index.hpp"

namespace veracity::index {

// Weighted bag of analyzed terms.
struct Query {
    std::map<std::string, double> weights;

    // Weight 1.0 per occurrence of each analyzed term.
    static Query from_text(std::string_view text, const Analyzer& analyzer);

    bool empty() const { return weights.empty(); }
    double total_weight() const;
    // Weights rescaled to sum to 1.
    Query normalized() const;

    bool operator==(const Query&) const = default;
};

enum class Stage { Bm25, Reranked };

std::string_view to_string(Stage stage);

struct ScoredDoc {
    std::string paragraph_id;
    std::string doc_id;
    DocSlot slot = 0;
    double score = 0.0;
    Stage stage = Stage::Bm25;

    bool operator==(const ScoredDoc&) const = default;
};

struct Bm25Params {
    double k1 = 0.9;
    double b = 0.4;
};

// ln(1 + (N - df + 0.5) / (df + 0.5)); never negative.
double bm25_idf(std::size_t doc_count, std::size_t df);

// Term-at-a-time over the postings lists. Returns at most k documents with
// positive score, sorted by score descending then paragraph id ascending.
std::vector<ScoredDoc> bm25_search(const InvertedIndex& index, const Query& query, std::size_t k,
                                   Bm25Params params = {});

// Document-at-a-time over the forward index, parallel across documents.
// Same contract as bm25_search.
std::vector<ScoredDoc> bm25_search_exhaustive(const InvertedIndex& index, const Query& query, std::size_t k,
                                              Bm25Params params = {});

struct Rm3Params {
    std::size_t fb_docs = 10;
    std::size_t fb_terms = 10;
    double original_weight = 0.5;
};

// Interpolates the normalized query with a relevance model estimated from the
// top feedback paragraphs; the result's weights sum to 1.
Query rm3_expand(const InvertedIndex& index, const Query& query, const std::vector<ScoredDoc>& feedback,
                 Rm3Params params = {});

}  // namespace veracity::index
