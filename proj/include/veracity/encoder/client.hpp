#pragma once

#include <memory>
#include <string>
#include <vector>

#include "veracity/encoder/backend.hpp"
#include "veracity/encoder/cache.hpp"
#include "veracity/encoder/types.hpp"

namespace veracity::encoder {

// The single boundary to pretrained-model functionality.
//
// Every response passes through the cache payload codec, float32 rounding
// included, whatever the mode, so a replayed result is bit-identical to the
// live one that was recorded.
//   live   - backend only, nothing persisted
//   record - backend on cache miss, every response stored
//   replay - cache only; a miss throws CacheMiss and the backend is never called
class EncoderClient {
public:
    EncoderClient(std::shared_ptr<EncoderBackend> backend, std::shared_ptr<EncoderCache> cache, CacheMode mode,
                  ModelIds models);

    // Takes model identities from the backend.
    EncoderClient(std::shared_ptr<EncoderBackend> backend, std::shared_ptr<EncoderCache> cache, CacheMode mode);

    CacheMode mode() const { return mode_; }
    const ModelIds& models() const { return models_; }
    EncoderCache* cache() const { return cache_.get(); }

    std::vector<SentenceEmbedding> embed_sentences(const std::vector<std::string>& texts);
    SentenceEmbedding embed_sentence(const std::string& text);

    std::vector<PairEncoding> encode_pairs(const std::vector<TextPair>& pairs);
    PairEncoding encode_pair(const std::string& claim, const std::string& evidence);
    std::vector<PairEncoding> encode_singles(const std::vector<std::string>& texts);
    PairEncoding encode_single(const std::string& text);

    std::vector<NliTriplet> nli_batch(const std::vector<TextPair>& pairs);
    NliTriplet nli(const std::string& claim, const std::string& evidence);

    std::vector<double> rerank(const std::string& query, const std::vector<std::string>& passages);
    std::vector<TaggedEntity> ner(const std::string& text);
    std::vector<std::size_t> tokenize_count(const std::vector<std::string>& texts);

    // Persists the cache in record mode.
    void flush() const;

private:
    template <typename Result, typename Decode, typename Compute>
    std::vector<Result> through_cache(const std::string& operation, const std::string& model_id,
                                      const std::vector<std::vector<std::string>>& inputs, Decode decode,
                                      Compute compute);

    EncoderBackend& backend() const;

    std::shared_ptr<EncoderBackend> backend_;
    std::shared_ptr<EncoderCache> cache_;
    CacheMode mode_;
    ModelIds models_;
};

}  // namespace veracity::encoder
