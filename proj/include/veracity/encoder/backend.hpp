#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "veracity/encoder/types.hpp"

namespace veracity::encoder {

// Model identities reported by a backend, one per role.
struct ModelIds {
    std::string embedder = "sentence-transformers/all-MiniLM-L12-v2";
    std::string pair_encoder = "roberta-large";
    std::string nli = "roberta-large-mnli";
    std::string reranker = "castorini/monot5-base-msmarco";
    std::string ner = "en_core_web_trf";
    std::string tokenizer = "bert-base-uncased";
};

using TextPair = std::pair<std::string, std::string>;

// Source of pretrained-model outputs. Implementations must be deterministic
// for fixed inputs and safe to call from several threads.
class EncoderBackend {
public:
    virtual ~EncoderBackend() = default;

    virtual ModelIds models() const = 0;
    virtual std::vector<SentenceEmbedding> embed(const std::vector<std::string>& texts) = 0;
    virtual std::vector<PairEncoding> encode_pairs(const std::vector<TextPair>& pairs) = 0;
    virtual std::vector<PairEncoding> encode_singles(const std::vector<std::string>& texts) = 0;
    virtual std::vector<NliTriplet> nli(const std::vector<TextPair>& pairs) = 0;
    virtual std::vector<double> rerank(const std::string& query, const std::vector<std::string>& passages) = 0;
    virtual std::vector<std::vector<TaggedEntity>> ner(const std::vector<std::string>& texts) = 0;
    virtual std::vector<std::size_t> tokenize_count(const std::vector<std::string>& texts) = 0;
};

}  // namespace veracity::encoder
