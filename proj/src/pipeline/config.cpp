#include "veracity/pipeline/config.hpp"

#include <fstream>
#include <set>

#include "veracity/encoder/codec.hpp"

namespace veracity::pipeline {

using nlohmann::json;

json PipelineConfig::to_json() const {
    json j = {{"claims", claims.string()},
              {"docs", docs.string()},
              {"index_dir", index_dir.string()},
              {"cache", cache.string()},
              {"checkpoint", checkpoint.string()},
              {"paragraph_tokens", paragraph_tokens},
              {"k1", bm25.k1},
              {"b", bm25.b},
              {"first_k", first_k},
              {"final_k", final_k},
              {"rm3", rm3},
              {"rm3_fb_docs", rm3_params.fb_docs},
              {"rm3_fb_terms", rm3_params.fb_terms},
              {"rm3_original_weight", rm3_params.original_weight},
              {"scorer", scorer},
              {"encoder", encoder},
              {"mode", std::string(encoder::to_string(mode))},
              {"embed_dim", embed_dim},
              {"encoder_dim", encoder_dim},
              {"preset", std::string(dedup::to_string(preset))},
              {"dedup_policy", std::string(dedup::to_string(dedup_policy))},
              {"dedup_candidates", dedup_candidates},
              {"evidence_policy", std::string(evidence::to_string(evidence_policy))},
              {"evidence_docs", evidence_docs},
              {"evidence_per_doc", evidence_per_doc},
              {"min_sentence_tokens", min_sentence_tokens},
              {"head", std::string(verdict::to_string(head))},
              {"batch_size", batch_size},
              {"folds", folds},
              {"seed", seed}};
    j["epochs"] = epochs ? json(*epochs) : json(nullptr);
    j["learning_rate"] = learning_rate ? json(*learning_rate) : json(nullptr);
    return j;
}

PipelineConfig PipelineConfig::from_json(const json& j) {
    if (!j.is_object()) throw UsageError("config: expected a JSON object");
    PipelineConfig c;
    const json defaults = c.to_json();
    for (const auto& [key, value] : j.items()) {
        if (!defaults.contains(key)) throw UsageError("config: unknown key '" + key + "'");
    }
    try {
        auto path = [&](const char* key, std::filesystem::path& out) {
            if (j.contains(key)) out = j[key].get<std::string>();
        };
        auto get = [&](const char* key, auto& out) {
            if (j.contains(key)) out = j[key].get<std::decay_t<decltype(out)>>();
        };
        path("claims", c.claims);
        path("docs", c.docs);
        path("index_dir", c.index_dir);
        path("cache", c.cache);
        path("checkpoint", c.checkpoint);
        get("paragraph_tokens", c.paragraph_tokens);
        get("k1", c.bm25.k1);
        get("b", c.bm25.b);
        get("first_k", c.first_k);
        get("final_k", c.final_k);
        get("rm3", c.rm3);
        get("rm3_fb_docs", c.rm3_params.fb_docs);
        get("rm3_fb_terms", c.rm3_params.fb_terms);
        get("rm3_original_weight", c.rm3_params.original_weight);
        get("scorer", c.scorer);
        get("encoder", c.encoder);
        if (j.contains("mode")) c.mode = encoder::parse_cache_mode(j["mode"].get<std::string>());
        get("embed_dim", c.embed_dim);
        get("encoder_dim", c.encoder_dim);
        if (j.contains("preset")) c.preset = dedup::parse_preset(j["preset"].get<std::string>());
        if (j.contains("dedup_policy")) c.dedup_policy = dedup::parse_policy(j["dedup_policy"].get<std::string>());
        get("dedup_candidates", c.dedup_candidates);
        if (j.contains("evidence_policy")) {
            c.evidence_policy = evidence::parse_selection_policy(j["evidence_policy"].get<std::string>());
        }
        get("evidence_docs", c.evidence_docs);
        get("evidence_per_doc", c.evidence_per_doc);
        get("min_sentence_tokens", c.min_sentence_tokens);
        if (j.contains("head")) c.head = verdict::parse_head_kind(j["head"].get<std::string>());
        if (j.contains("epochs") && !j["epochs"].is_null()) c.epochs = j["epochs"].get<std::size_t>();
        if (j.contains("learning_rate") && !j["learning_rate"].is_null()) {
            c.learning_rate = j["learning_rate"].get<double>();
        }
        get("batch_size", c.batch_size);
        get("folds", c.folds);
        get("seed", c.seed);
    } catch (const json::exception& e) {
        throw UsageError(std::string("config: ") + e.what());
    } catch (const InvalidArgument& e) {
        throw UsageError(std::string("config: ") + e.what());
    }
    return c;
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config " + path.string());
    PipelineConfig c;
    try {
        c = from_json(json::parse(in));
    } catch (const json::parse_error& e) {
        throw UsageError("config " + path.string() + ": " + e.what());
    }
    // Relative paths in a config file are relative to the file.
    const auto base = path.parent_path();
    for (auto* p : {&c.claims, &c.docs, &c.index_dir, &c.cache, &c.checkpoint}) {
        if (!p->empty() && p->is_relative()) *p = base / *p;
    }
    return c;
}

// The cache mode only decides where encoder responses come from, so record and
// replay runs of one configuration share a hash.
std::string PipelineConfig::hash() const {
    auto j = to_json();
    j.erase("mode");
    return encoder::sha256_hex(j.dump()).substr(0, 16);
}

void PipelineConfig::validate() const {
    if (paragraph_tokens == 0) throw UsageError("paragraph_tokens must be >= 1");
    if (!(bm25.k1 > 0.0)) throw UsageError("k1 must be > 0");
    if (!(bm25.b >= 0.0 && bm25.b <= 1.0)) throw UsageError("b must lie in [0, 1]");
    if (final_k == 0 || final_k > first_k) throw UsageError("need 1 <= final_k <= first_k");
    if (!(rm3_params.original_weight >= 0.0 && rm3_params.original_weight <= 1.0)) {
        throw UsageError("rm3_original_weight must lie in [0, 1]");
    }
    if (rm3_params.fb_docs == 0 || rm3_params.fb_terms == 0) throw UsageError("rm3 feedback sizes must be >= 1");
    if (evidence_docs == 0 || evidence_per_doc == 0) throw UsageError("evidence sizes must be >= 1");
    if (batch_size == 0) throw UsageError("batch_size must be >= 1");
    if (epochs && *epochs == 0) throw UsageError("epochs must be >= 1");
    if (learning_rate && !(*learning_rate >= 0.0)) throw UsageError("learning_rate must be >= 0");
    if (folds < 2) throw UsageError("folds must be >= 2");
    if (mode != encoder::CacheMode::Live && cache.empty()) throw UsageError("--mode record/replay needs --cache");
    if (encoder != "hashing" && encoder.rfind("http://", 0) != 0 && encoder.rfind("https://", 0) != 0) {
        throw UsageError("encoder must be 'hashing' or an http(s):// URL");
    }
}

verdict::HeadConfig PipelineConfig::head_config() const {
    return verdict::HeadConfig::defaults(head, encoder_dim);
}

verdict::TrainConfig PipelineConfig::train_config() const {
    verdict::TrainConfig t = verdict::TrainConfig::defaults(head);
    if (epochs) t.epochs = *epochs;
    if (learning_rate) t.lr.base = *learning_rate;
    t.batch_size = batch_size;
    return t;
}

}  // namespace veracity::pipeline
