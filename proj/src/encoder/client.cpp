#include "veracity/encoder/client.hpp"

#include <cmath>

#include "veracity/encoder/codec.hpp"
#include "veracity/error.hpp"

namespace veracity::encoder {

using nlohmann::json;

namespace {

json embedding_payload(const SentenceEmbedding& e) {
    return {{"model_id", e.model_id}, {"vector", encode_array(e.vector, {e.vector.size()})}};
}

SentenceEmbedding decode_embedding(const json& p) {
    auto arr = decode_array(p.at("vector"));
    if (arr.dims.size() != 1 || arr.values.empty()) throw ServiceError("embed: vector must be 1-d and non-empty");
    return {std::move(arr.values), p.at("model_id").get<std::string>()};
}

json encoding_payload(const PairEncoding& e) {
    if (e.token_count == 0) throw ServiceError("encode: token count must be >= 1");
    if (e.token_vectors.size() != e.token_count * e.dim || e.pooled.size() != e.dim) {
        throw ServiceError("encode: vector sizes do not match token count and dimension");
    }
    return {{"model_id", e.model_id},
            {"token_count", e.token_count},
            {"token_vectors", encode_array(e.token_vectors, {e.token_count, e.dim})},
            {"pooled", encode_array(e.pooled, {e.dim})}};
}

PairEncoding decode_encoding(const json& p) {
    PairEncoding e;
    auto tokens = decode_array(p.at("token_vectors"));
    auto pooled = decode_array(p.at("pooled"));
    if (tokens.dims.size() != 2 || pooled.dims.size() != 1 || tokens.dims[1] != pooled.dims[0] ||
        tokens.dims[0] == 0) {
        throw ServiceError("encode: inconsistent token/pooled dimensions");
    }
    e.token_count = p.at("token_count").get<std::size_t>();
    if (e.token_count != tokens.dims[0]) throw ServiceError("encode: token_count does not match token_vectors");
    e.dim = pooled.dims[0];
    e.token_vectors = std::move(tokens.values);
    e.pooled = std::move(pooled.values);
    e.model_id = p.at("model_id").get<std::string>();
    return e;
}

json triplet_payload(const NliTriplet& t, const std::string& model_id) {
    validate_triplet(t);
    return {{"model_id", model_id}, {"probabilities", encode_array({t.contradiction, t.neutral, t.entailment}, {3})}};
}

NliTriplet decode_triplet(const json& p) {
    auto arr = decode_array(p.at("probabilities"));
    if (arr.values.size() != 3) throw ServiceError("nli: expected three probabilities");
    NliTriplet t{arr.values[0], arr.values[1], arr.values[2]};
    validate_triplet(t);
    return t;
}

}  // namespace

EncoderClient::EncoderClient(std::shared_ptr<EncoderBackend> backend, std::shared_ptr<EncoderCache> cache,
                             CacheMode mode, ModelIds models)
    : backend_(std::move(backend)), cache_(std::move(cache)), mode_(mode), models_(std::move(models)) {
    if (mode_ != CacheMode::Replay && !backend_) throw InvalidArgument("encoder client: live/record mode needs a backend");
    if (mode_ != CacheMode::Live && !cache_) throw InvalidArgument("encoder client: record/replay mode needs a cache");
}

EncoderClient::EncoderClient(std::shared_ptr<EncoderBackend> backend, std::shared_ptr<EncoderCache> cache,
                             CacheMode mode)
    : EncoderClient(backend, std::move(cache), mode, backend ? backend->models() : ModelIds{}) {}

EncoderBackend& EncoderClient::backend() const {
    if (!backend_) throw ServiceError("encoder client: no backend configured");
    return *backend_;
}

template <typename Result, typename Decode, typename Compute>
std::vector<Result> EncoderClient::through_cache(const std::string& operation, const std::string& model_id,
                                                 const std::vector<std::vector<std::string>>& inputs, Decode decode,
                                                 Compute compute) {
    for (const auto& fields : inputs) {
        for (const auto& f : fields) {
            if (canonicalize_text(f).empty() && operation != "rerank") {
                throw InvalidArgument(operation + ": input texts must be non-empty");
            }
        }
    }
    std::vector<std::string> keys;
    keys.reserve(inputs.size());
    for (const auto& fields : inputs) keys.push_back(EncoderCache::make_key(operation, model_id, fields));

    std::vector<json> payloads(inputs.size());
    std::vector<std::size_t> missing;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        if (mode_ != CacheMode::Live) {
            if (auto hit = cache_->find(keys[i])) {
                payloads[i] = std::move(*hit);
                continue;
            }
            if (mode_ == CacheMode::Replay) {
                throw CacheMiss(operation + ": no recorded response for key " + keys[i]);
            }
        }
        missing.push_back(i);
    }
    if (!missing.empty()) {
        std::vector<json> fresh = compute(missing);
        if (fresh.size() != missing.size()) throw ServiceError(operation + ": backend returned a misaligned batch");
        for (std::size_t j = 0; j < missing.size(); ++j) {
            const auto i = missing[j];
            payloads[i] = std::move(fresh[j]);
            if (mode_ == CacheMode::Record) cache_->store(keys[i], operation, payloads[i]);
        }
        if (mode_ == CacheMode::Record) cache_->flush();
    }
    std::vector<Result> out;
    out.reserve(inputs.size());
    for (const auto& p : payloads) {
        try {
            out.push_back(decode(p));
        } catch (const json::exception& e) {
            throw ServiceError(operation + ": malformed payload: " + e.what());
        }
    }
    return out;
}

std::vector<SentenceEmbedding> EncoderClient::embed_sentences(const std::vector<std::string>& texts) {
    std::vector<std::vector<std::string>> inputs;
    for (const auto& t : texts) inputs.push_back({t});
    return through_cache<SentenceEmbedding>("embed", models_.embedder, inputs, decode_embedding,
                                            [&](const std::vector<std::size_t>& idx) {
                                                std::vector<std::string> batch;
                                                for (auto i : idx) batch.push_back(texts[i]);
                                                auto res = backend().embed(batch);
                                                std::vector<json> out;
                                                for (const auto& e : res) out.push_back(embedding_payload(e));
                                                return out;
                                            });
}

SentenceEmbedding EncoderClient::embed_sentence(const std::string& text) { return embed_sentences({text}).front(); }

std::vector<PairEncoding> EncoderClient::encode_pairs(const std::vector<TextPair>& pairs) {
    std::vector<std::vector<std::string>> inputs;
    for (const auto& [c, e] : pairs) inputs.push_back({c, e});
    return through_cache<PairEncoding>("encode_pair", models_.pair_encoder, inputs, decode_encoding,
                                       [&](const std::vector<std::size_t>& idx) {
                                           std::vector<TextPair> batch;
                                           for (auto i : idx) batch.push_back(pairs[i]);
                                           auto res = backend().encode_pairs(batch);
                                           std::vector<json> out;
                                           for (const auto& e : res) out.push_back(encoding_payload(e));
                                           return out;
                                       });
}

PairEncoding EncoderClient::encode_pair(const std::string& claim, const std::string& evidence) {
    return encode_pairs({{claim, evidence}}).front();
}

std::vector<PairEncoding> EncoderClient::encode_singles(const std::vector<std::string>& texts) {
    std::vector<std::vector<std::string>> inputs;
    for (const auto& t : texts) inputs.push_back({t});
    return through_cache<PairEncoding>("encode_single", models_.pair_encoder, inputs, decode_encoding,
                                       [&](const std::vector<std::size_t>& idx) {
                                           std::vector<std::string> batch;
                                           for (auto i : idx) batch.push_back(texts[i]);
                                           auto res = backend().encode_singles(batch);
                                           std::vector<json> out;
                                           for (const auto& e : res) out.push_back(encoding_payload(e));
                                           return out;
                                       });
}

PairEncoding EncoderClient::encode_single(const std::string& text) { return encode_singles({text}).front(); }

std::vector<NliTriplet> EncoderClient::nli_batch(const std::vector<TextPair>& pairs) {
    std::vector<std::vector<std::string>> inputs;
    for (const auto& [c, e] : pairs) inputs.push_back({c, e});
    return through_cache<NliTriplet>("nli", models_.nli, inputs, decode_triplet,
                                     [&](const std::vector<std::size_t>& idx) {
                                         std::vector<TextPair> batch;
                                         for (auto i : idx) batch.push_back(pairs[i]);
                                         auto res = backend().nli(batch);
                                         std::vector<json> out;
                                         for (const auto& t : res) out.push_back(triplet_payload(t, models_.nli));
                                         return out;
                                     });
}

NliTriplet EncoderClient::nli(const std::string& claim, const std::string& evidence) {
    return nli_batch({{claim, evidence}}).front();
}

std::vector<double> EncoderClient::rerank(const std::string& query, const std::vector<std::string>& passages) {
    if (canonicalize_text(query).empty()) throw InvalidArgument("rerank: empty query");
    std::vector<std::vector<std::string>> inputs;
    for (const auto& p : passages) inputs.push_back({query, p});
    const auto decode = [](const json& p) {
        auto arr = decode_array(p.at("score"));
        if (arr.values.size() != 1) throw ServiceError("rerank: expected one score");
        double s = arr.values[0];
        if (s < 0.0 || s > 1.0) throw ServiceError("rerank: score outside [0,1]");
        return s;
    };
    return through_cache<double>("rerank", models_.reranker, inputs, decode,
                                 [&](const std::vector<std::size_t>& idx) {
                                     std::vector<std::string> batch;
                                     for (auto i : idx) batch.push_back(passages[i]);
                                     auto res = backend().rerank(query, batch);
                                     std::vector<json> out;
                                     for (double s : res) {
                                         if (!std::isfinite(s) || s < 0.0 || s > 1.0) {
                                             throw ServiceError("rerank: score outside [0,1]");
                                         }
                                         out.push_back({{"model_id", models_.reranker}, {"score", encode_array({s}, {1})}});
                                     }
                                     return out;
                                 });
}

std::vector<TaggedEntity> EncoderClient::ner(const std::string& text) {
    const auto decode = [](const json& p) {
        std::vector<TaggedEntity> out;
        for (const auto& e : p.at("entities")) {
            out.push_back({e.at("start").get<std::size_t>(), e.at("end").get<std::size_t>(),
                           e.at("text").get<std::string>(), e.at("kind").get<std::string>()});
        }
        return out;
    };
    return through_cache<std::vector<TaggedEntity>>(
               "ner", models_.ner, {{text}}, decode,
               [&](const std::vector<std::size_t>&) {
                   auto res = backend().ner({text});
                   if (res.size() != 1) throw ServiceError("ner: misaligned batch");
                   json entities = json::array();
                   for (const auto& e : res[0]) {
                       entities.push_back({{"start", e.start}, {"end", e.end}, {"text", e.text}, {"kind", e.kind}});
                   }
                   return std::vector<json>{{{"model_id", models_.ner}, {"entities", entities}}};
               })
        .front();
}

std::vector<std::size_t> EncoderClient::tokenize_count(const std::vector<std::string>& texts) {
    std::vector<std::vector<std::string>> inputs;
    for (const auto& t : texts) inputs.push_back({t});
    return through_cache<std::size_t>("tokenize_count", models_.tokenizer, inputs,
                                      [](const json& p) { return p.at("count").get<std::size_t>(); },
                                      [&](const std::vector<std::size_t>& idx) {
                                          std::vector<std::string> batch;
                                          for (auto i : idx) batch.push_back(texts[i]);
                                          auto res = backend().tokenize_count(batch);
                                          std::vector<json> out;
                                          for (auto n : res) out.push_back({{"model_id", models_.tokenizer}, {"count", n}});
                                          return out;
                                      });
}

void EncoderClient::flush() const {
    if (mode_ == CacheMode::Record && cache_) cache_->flush();
}

}  // namespace veracity::encoder
