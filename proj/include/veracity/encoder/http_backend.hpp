#pragma once

#include <cstddef>
#include <memory>
#include <string>

#include <json.hpp>

#include "veracity/encoder/backend.hpp"

namespace veracity::encoder {

// Client side of the model sidecar's HTTP protocol (schema/encoder_service.schema.json).
class HttpBackend : public EncoderBackend {
public:
    // `base_url` like "http://127.0.0.1:8088".
    explicit HttpBackend(std::string base_url, std::size_t max_batch = 32, int timeout_seconds = 120);
    ~HttpBackend() override;

    // GET /health. Throws ServiceError when unreachable or malformed.
    nlohmann::json health() const;

    ModelIds models() const override;
    std::vector<SentenceEmbedding> embed(const std::vector<std::string>& texts) override;
    std::vector<PairEncoding> encode_pairs(const std::vector<TextPair>& pairs) override;
    std::vector<PairEncoding> encode_singles(const std::vector<std::string>& texts) override;
    std::vector<NliTriplet> nli(const std::vector<TextPair>& pairs) override;
    std::vector<double> rerank(const std::string& query, const std::vector<std::string>& passages) override;
    std::vector<std::vector<TaggedEntity>> ner(const std::vector<std::string>& texts) override;
    std::vector<std::size_t> tokenize_count(const std::vector<std::string>& texts) override;

private:
    nlohmann::json post(const std::string& endpoint, const nlohmann::json& body) const;

    std::string base_url_;
    std::size_t max_batch_;
    int timeout_seconds_;
};

}  // namespace veracity::encoder
