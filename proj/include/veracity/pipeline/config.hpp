#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "veracity/dedup/dedup.hpp"
#include "veracity/encoder/cache.hpp"
#include "veracity/evidence/evidence.hpp"
#include "veracity/index/bm25.hpp"
#include "veracity/verdict/train.hpp"

namespace veracity::pipeline {

// Bad configuration or arguments; the CLI maps it to exit code 1.
class UsageError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

struct PipelineConfig {
    std::filesystem::path claims;
    std::filesystem::path docs;
    std::filesystem::path index_dir;
    std::filesystem::path cache;
    std::filesystem::path checkpoint;

    std::size_t paragraph_tokens = 300;
    index::Bm25Params bm25;
    std::size_t first_k = 100;
    std::size_t final_k = 10;
    bool rm3 = false;
    index::Rm3Params rm3_params;
    // "overlap", "fixture:<path>", "service:<url>"
    std::string scorer = "overlap";

    // "hashing" (in-process fixture encoder) or an http:// sidecar URL.
    std::string encoder = "hashing";
    encoder::CacheMode mode = encoder::CacheMode::Live;
    std::size_t embed_dim = 384;
    std::size_t encoder_dim = 1024;

    dedup::Preset preset = dedup::Preset::Large;
    dedup::Policy dedup_policy = dedup::Policy::EarlierMatch;
    std::size_t dedup_candidates = 20;

    evidence::SelectionPolicy evidence_policy = evidence::SelectionPolicy::FlatTopN;
    std::size_t evidence_docs = 10;
    std::size_t evidence_per_doc = 3;
    std::size_t min_sentence_tokens = 3;

    verdict::HeadKind head = verdict::HeadKind::NliSan;
    std::optional<std::size_t> epochs;
    std::optional<double> learning_rate;
    std::size_t batch_size = 30;
    std::size_t folds = 5;

    std::uint64_t seed = 13;

    nlohmann::json to_json() const;
    // Unknown keys are rejected.
    static PipelineConfig from_json(const nlohmann::json& j);
    // Relative paths inside the file resolve against its directory.
    static PipelineConfig load(const std::filesystem::path& path);

    // First 16 hex digits of SHA-256 over the canonical JSON form.
    std::string hash() const;

    void validate() const;
    verdict::HeadConfig head_config() const;
    verdict::TrainConfig train_config() const;
};

}  // namespace veracity::pipeline
