#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "veracity/encoder/backend.hpp"
#include "veracity/index/analyzer.hpp"

namespace veracity::encoder {

struct HashingOptions {
    std::size_t embed_dim = 384;
    std::size_t encoder_dim = 1024;
    std::size_t max_sequence = 512;
    std::uint64_t seed = 0x5eed;
};

// Deterministic in-process fixture encoder. Words map to pseudo-random
// vectors through a seeded hash, so texts sharing words embed close together.
// NLI and relevance outputs are lexical-overlap heuristics. It stands in for
// the model sidecar in tests and offline demos; it is not a language model.
class HashingBackend : public EncoderBackend {
public:
    explicit HashingBackend(HashingOptions options = {});

    ModelIds models() const override;
    std::vector<SentenceEmbedding> embed(const std::vector<std::string>& texts) override;
    std::vector<PairEncoding> encode_pairs(const std::vector<TextPair>& pairs) override;
    std::vector<PairEncoding> encode_singles(const std::vector<std::string>& texts) override;
    std::vector<NliTriplet> nli(const std::vector<TextPair>& pairs) override;
    std::vector<double> rerank(const std::string& query, const std::vector<std::string>& passages) override;
    std::vector<std::vector<TaggedEntity>> ner(const std::vector<std::string>& texts) override;
    std::vector<std::size_t> tokenize_count(const std::vector<std::string>& texts) override;

    const HashingOptions& options() const { return options_; }

private:
    std::vector<double> word_vector(const std::string& word, std::size_t dim, std::uint64_t salt) const;
    PairEncoding encode_tokens(std::vector<std::string> tokens) const;

    HashingOptions options_;
    index::Analyzer analyzer_;
};

// FNV-1a 64-bit.
std::uint64_t fnv1a(std::string_view data, std::uint64_t basis = 0xcbf29ce484222325ULL);

// Fraction of the query's distinct analyzed terms present in the passage.
double term_overlap(const index::Analyzer& analyzer, std::string_view query, std::string_view passage);

}  // namespace veracity::encoder
