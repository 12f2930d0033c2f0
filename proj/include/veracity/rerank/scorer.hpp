#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>

#include "veracity/encoder/client.hpp"
#include "veracity/index/analyzer.hpp"

namespace veracity::rerank {

// Cross-encoder style relevance: (query, passage) -> probability in [0, 1].
// Implementations are deterministic for fixed inputs and identity.
class RelevanceScorer {
public:
    virtual ~RelevanceScorer() = default;
    virtual double score(std::string_view query, std::string_view passage) const = 0;
    virtual std::string identity() const = 0;
};

// Score table loaded from a JSONL file of {"query", "passage", "score"}.
// Unknown pairs are a scorer failure.
class FixtureScorer : public RelevanceScorer {
public:
    explicit FixtureScorer(const std::filesystem::path& path);
    explicit FixtureScorer(std::map<std::pair<std::string, std::string>, double> table, std::string name = "inline");

    double score(std::string_view query, std::string_view passage) const override;
    std::string identity() const override { return "fixture:" + name_; }

private:
    std::map<std::pair<std::string, std::string>, double, std::less<>> table_;
    std::string name_;
};

// Fraction of the query's distinct analyzed terms found in the passage.
class OverlapScorer : public RelevanceScorer {
public:
    explicit OverlapScorer(index::Analyzer analyzer = index::Analyzer{});

    double score(std::string_view query, std::string_view passage) const override;
    std::string identity() const override { return "overlap"; }

private:
    index::Analyzer analyzer_;
};

// Relevance from the model service's /rerank endpoint, through the encoder cache.
class ServiceScorer : public RelevanceScorer {
public:
    ServiceScorer(std::shared_ptr<encoder::EncoderClient> client, std::string url);

    double score(std::string_view query, std::string_view passage) const override;
    std::string identity() const override { return "service:" + url_; }

private:
    std::shared_ptr<encoder::EncoderClient> client_;
    std::string url_;
};

// Resolves "fixture:<path>", "service:<url>" or "overlap". The client is
// required for service scorers.
std::unique_ptr<RelevanceScorer> make_scorer(std::string_view identity,
                                             std::shared_ptr<encoder::EncoderClient> client = nullptr);

}  // namespace veracity::rerank
