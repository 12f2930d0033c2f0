#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "veracity/corpus/records.hpp"
#include "veracity/index/bm25.hpp"
#include "veracity/rerank/scorer.hpp"

namespace veracity::dedup {

// Stored once per unordered pair with a < b.
struct SimilarityPair {
    std::string a;
    std::string b;
    double probability = 0.0;

    bool operator==(const SimilarityPair&) const = default;
};

enum class Preset { Large, Small, Custom };

std::string_view to_string(Preset preset);
Preset parse_preset(std::string_view text);

struct DedupConfig {
    double threshold = 0.99;  // removal threshold tau in (0, 1]
    std::size_t candidate_k = 20;
    Preset preset = Preset::Large;

    // LARGE removes only near-certain duplicates (tau = 0.99) and keeps more
    // claims; SMALL removes at tau = 0.90 and keeps fewer.
    static DedupConfig large();
    static DedupConfig small();
    static DedupConfig for_preset(Preset preset);

    void validate() const;
};

enum class Policy {
    // Removed iff paired with any claim earlier in id order. Kept sets shrink
    // monotonically as the threshold falls.
    EarlierMatch,
    // Removed iff paired with an earlier claim that was itself kept. Not
    // monotone in the threshold.
    GreedyFirstKept,
};

std::string_view to_string(Policy policy);
Policy parse_policy(std::string_view text);

struct RemovedClaim {
    std::string id;
    SimilarityPair trigger;
};

struct LabelCounts {
    std::size_t false_count = 0;
    std::size_t true_count = 0;
    std::size_t total() const { return false_count + true_count; }

    bool operator==(const LabelCounts&) const = default;
};

struct DedupReport {
    std::vector<std::string> kept;  // canonical id order
    std::vector<RemovedClaim> removed;
    LabelCounts before;
    LabelCounts after;
};

LabelCounts count_labels(const std::vector<corpus::ClaimRecord>& claims);

// One single-paragraph "document" per claim (doc_id = claim id).
index::InvertedIndex build_claim_index(const std::vector<corpus::ClaimRecord>& claims,
                                       index::AnalyzerConfig config = index::AnalyzerConfig::english());

// Every canonical pair reachable through BM25 candidate generation (self
// excluded), each scored once as scorer(text(a), text(b)). Sorted by (a, b).
std::vector<SimilarityPair> score_candidate_pairs(const std::vector<corpus::ClaimRecord>& claims,
                                                  const index::InvertedIndex& claim_index,
                                                  const rerank::RelevanceScorer& scorer, std::size_t candidate_k,
                                                  index::Bm25Params bm25 = {});

std::vector<SimilarityPair> filter_pairs(const std::vector<SimilarityPair>& scored, double threshold);

// score_candidate_pairs followed by the probability >= threshold filter.
std::vector<SimilarityPair> find_similar_pairs(const std::vector<corpus::ClaimRecord>& claims,
                                               const index::InvertedIndex& claim_index,
                                               const rerank::RelevanceScorer& scorer, std::size_t candidate_k,
                                               double threshold, index::Bm25Params bm25 = {});

DedupReport deduplicate(const std::vector<corpus::ClaimRecord>& claims, const std::vector<SimilarityPair>& pairs,
                        Policy policy = Policy::EarlierMatch);

struct SimilarityStats {
    double mean = 0.0;
    double std = 0.0;  // sample standard deviation
    double p90 = 0.0;  // nearest-rank
};

// Mean, sample standard deviation and nearest-rank 90th percentile.
SimilarityStats summarize(std::vector<double> values);

using PairScore = std::function<double(const corpus::ClaimRecord&, const corpus::ClaimRecord&)>;

// Statistics of each claim's best match against all other claims.
SimilarityStats similarity_stats(const std::vector<corpus::ClaimRecord>& claims, const PairScore& score);

// Line records: {"record":"kept",...}, {"record":"removed",...,"trigger":{...}}.
void write_report_records(std::ostream& out, const DedupReport& report, std::string_view preset);

}  // namespace veracity::dedup
