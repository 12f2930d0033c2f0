#include "veracity/encoder/http_backend.hpp"

#include <algorithm>

#include <httplib.h>

#include "veracity/encoder/codec.hpp"
#include "veracity/error.hpp"

namespace veracity::encoder {

using nlohmann::json;

namespace {

// Calls `fn(begin, end)` over consecutive slices of at most `max_batch` items.
template <typename Fn>
void batched(std::size_t n, std::size_t max_batch, Fn fn) {
    for (std::size_t begin = 0; begin < n; begin += max_batch) fn(begin, std::min(n, begin + max_batch));
}

PairEncoding parse_encoding(const json& r, const std::string& model_id) {
    PairEncoding e;
    auto tokens = decode_array(r.at("token_vectors"));
    auto pooled = decode_array(r.at("pooled"));
    if (tokens.dims.size() != 2 || pooled.dims.size() != 1 || tokens.dims[1] != pooled.dims[0]) {
        throw ServiceError("encode: inconsistent dimensions in response");
    }
    e.token_count = r.at("token_count").get<std::size_t>();
    if (e.token_count != tokens.dims[0] || e.token_count == 0) throw ServiceError("encode: bad token_count");
    e.dim = pooled.dims[0];
    e.token_vectors = std::move(tokens.values);
    e.pooled = std::move(pooled.values);
    e.model_id = model_id;
    return e;
}

void expect_size(const json& array, std::size_t n, const char* what) {
    if (!array.is_array() || array.size() != n) {
        throw ServiceError(std::string(what) + ": response not index-aligned with request");
    }
}

}  // namespace

HttpBackend::HttpBackend(std::string base_url, std::size_t max_batch, int timeout_seconds)
    : base_url_(std::move(base_url)), max_batch_(std::max<std::size_t>(1, max_batch)), timeout_seconds_(timeout_seconds) {}

HttpBackend::~HttpBackend() = default;

json HttpBackend::post(const std::string& endpoint, const json& body) const {
    httplib::Client client(base_url_);
    client.set_read_timeout(timeout_seconds_, 0);
    client.set_connection_timeout(5, 0);
    auto res = client.Post(endpoint, body.dump(), "application/json");
    if (!res) throw ServiceError("service unavailable at " + base_url_ + endpoint + ": " + httplib::to_string(res.error()));
    if (res->status != 200) {
        std::string detail = res->body;
        try {
            auto j = json::parse(res->body);
            if (j.contains("error")) detail = j["error"].dump();
        } catch (const json::exception&) {
        }
        throw ServiceError(endpoint + " returned HTTP " + std::to_string(res->status) + ": " + detail);
    }
    try {
        return json::parse(res->body);
    } catch (const json::exception& e) {
        throw ServiceError(endpoint + ": response is not JSON: " + e.what());
    }
}

json HttpBackend::health() const {
    httplib::Client client(base_url_);
    client.set_connection_timeout(5, 0);
    auto res = client.Get("/health");
    if (!res) throw ServiceError("service unavailable at " + base_url_ + "/health");
    if (res->status != 200) throw ServiceError("/health returned HTTP " + std::to_string(res->status));
    try {
        return json::parse(res->body);
    } catch (const json::exception& e) {
        throw ServiceError(std::string("/health: response is not JSON: ") + e.what());
    }
}

ModelIds HttpBackend::models() const {
    const auto h = health();
    try {
        const auto& m = h.at("models");
        return {m.at("embedder").get<std::string>(), m.at("pair_encoder").get<std::string>(),
                m.at("nli").get<std::string>(),      m.at("reranker").get<std::string>(),
                m.at("ner").get<std::string>(),      m.at("tokenizer").get<std::string>()};
    } catch (const json::exception& e) {
        throw ServiceError(std::string("/health: missing model identities: ") + e.what());
    }
}

std::vector<SentenceEmbedding> HttpBackend::embed(const std::vector<std::string>& texts) {
    std::vector<SentenceEmbedding> out;
    batched(texts.size(), max_batch_, [&](std::size_t b, std::size_t e) {
        json body = {{"texts", std::vector<std::string>(texts.begin() + b, texts.begin() + e)}};
        auto r = post("/embed", body);
        try {
            expect_size(r.at("vectors"), e - b, "/embed");
            const auto model = r.at("model_id").get<std::string>();
            const auto dim = r.at("dimension").get<std::size_t>();
            for (const auto& v : r["vectors"]) {
                auto arr = decode_array(v);
                if (arr.values.size() != dim) throw ServiceError("/embed: vector dimension mismatch");
                out.push_back({std::move(arr.values), model});
            }
        } catch (const json::exception& ex) {
            throw ServiceError(std::string("/embed: malformed response: ") + ex.what());
        }
    });
    return out;
}

std::vector<PairEncoding> HttpBackend::encode_pairs(const std::vector<TextPair>& pairs) {
    std::vector<PairEncoding> out;
    batched(pairs.size(), max_batch_, [&](std::size_t b, std::size_t e) {
        json items = json::array();
        for (std::size_t i = b; i < e; ++i) items.push_back({{"claim", pairs[i].first}, {"evidence", pairs[i].second}});
        auto r = post("/encode-pair", {{"pairs", items}});
        try {
            expect_size(r.at("results"), e - b, "/encode-pair");
            const auto model = r.at("model_id").get<std::string>();
            for (const auto& item : r["results"]) out.push_back(parse_encoding(item, model));
        } catch (const json::exception& ex) {
            throw ServiceError(std::string("/encode-pair: malformed response: ") + ex.what());
        }
    });
    return out;
}

std::vector<PairEncoding> HttpBackend::encode_singles(const std::vector<std::string>& texts) {
    std::vector<PairEncoding> out;
    batched(texts.size(), max_batch_, [&](std::size_t b, std::size_t e) {
        json body = {{"texts", std::vector<std::string>(texts.begin() + b, texts.begin() + e)}};
        auto r = post("/encode-single", body);
        try {
            expect_size(r.at("results"), e - b, "/encode-single");
            const auto model = r.at("model_id").get<std::string>();
            for (const auto& item : r["results"]) out.push_back(parse_encoding(item, model));
        } catch (const json::exception& ex) {
            throw ServiceError(std::string("/encode-single: malformed response: ") + ex.what());
        }
    });
    return out;
}

std::vector<NliTriplet> HttpBackend::nli(const std::vector<TextPair>& pairs) {
    std::vector<NliTriplet> out;
    batched(pairs.size(), max_batch_, [&](std::size_t b, std::size_t e) {
        json items = json::array();
        for (std::size_t i = b; i < e; ++i) items.push_back({{"claim", pairs[i].first}, {"evidence", pairs[i].second}});
        auto r = post("/nli", {{"pairs", items}});
        try {
            expect_size(r.at("results"), e - b, "/nli");
            for (const auto& item : r["results"]) {
                NliTriplet t{item.at("contradiction").get<double>(), item.at("neutral").get<double>(),
                             item.at("entailment").get<double>()};
                validate_triplet(t);
                out.push_back(t);
            }
        } catch (const json::exception& ex) {
            throw ServiceError(std::string("/nli: malformed response: ") + ex.what());
        }
    });
    return out;
}

std::vector<double> HttpBackend::rerank(const std::string& query, const std::vector<std::string>& passages) {
    std::vector<double> out;
    batched(passages.size(), max_batch_, [&](std::size_t b, std::size_t e) {
        json body = {{"query", query}, {"passages", std::vector<std::string>(passages.begin() + b, passages.begin() + e)}};
        auto r = post("/rerank", body);
        try {
            expect_size(r.at("scores"), e - b, "/rerank");
            for (const auto& s : r["scores"]) out.push_back(s.get<double>());
        } catch (const json::exception& ex) {
            throw ServiceError(std::string("/rerank: malformed response: ") + ex.what());
        }
    });
    return out;
}

std::vector<std::vector<TaggedEntity>> HttpBackend::ner(const std::vector<std::string>& texts) {
    std::vector<std::vector<TaggedEntity>> out;
    batched(texts.size(), max_batch_, [&](std::size_t b, std::size_t e) {
        json body = {{"texts", std::vector<std::string>(texts.begin() + b, texts.begin() + e)}};
        auto r = post("/ner", body);
        try {
            expect_size(r.at("results"), e - b, "/ner");
            for (const auto& spans : r["results"]) {
                std::vector<TaggedEntity> entities;
                for (const auto& s : spans) {
                    entities.push_back({s.at("start").get<std::size_t>(), s.at("end").get<std::size_t>(),
                                        s.at("text").get<std::string>(), s.at("kind").get<std::string>()});
                }
                out.push_back(std::move(entities));
            }
        } catch (const json::exception& ex) {
            throw ServiceError(std::string("/ner: malformed response: ") + ex.what());
        }
    });
    return out;
}

std::vector<std::size_t> HttpBackend::tokenize_count(const std::vector<std::string>& texts) {
    std::vector<std::size_t> out;
    batched(texts.size(), max_batch_, [&](std::size_t b, std::size_t e) {
        json body = {{"texts", std::vector<std::string>(texts.begin() + b, texts.begin() + e)}};
        auto r = post("/tokenize-count", body);
        try {
            expect_size(r.at("counts"), e - b, "/tokenize-count");
            for (const auto& c : r["counts"]) out.push_back(c.get<std::size_t>());
        } catch (const json::exception& ex) {
            throw ServiceError(std::string("/tokenize-count: malformed response: ") + ex.what());
        }
    });
    return out;
}

}  // namespace veracity::encoder
