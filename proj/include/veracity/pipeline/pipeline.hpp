#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "veracity/corpus/records.hpp"
#include "veracity/encoder/client.hpp"
#include "veracity/evidence/evidence.hpp"
#include "veracity/index/inverted_index.hpp"
#include "veracity/pipeline/config.hpp"
#include "veracity/rerank/rerank.hpp"
#include "veracity/verdict/inputs.hpp"

namespace veracity::pipeline {

using Records = std::vector<nlohmann::json>;

// Exclusive advisory lock on <path>.lock, released on destruction.
class FileLock {
public:
    explicit FileLock(const std::filesystem::path& target);
    ~FileLock();
    FileLock(const FileLock&) = delete;
    FileLock& operator=(const FileLock&) = delete;

private:
    int fd_ = -1;
};

// Shared state for the commands. Components are created on first use.
class Pipeline {
public:
    explicit Pipeline(PipelineConfig config);

    const PipelineConfig& config() const { return config_; }

    encoder::EncoderClient& client();
    const rerank::RelevanceScorer& scorer();
    const index::InvertedIndex& index();
    const std::vector<corpus::DocumentRecord>& documents();
    std::vector<corpus::ClaimRecord> claims() const;

    // Adds config_hash and seed.
    nlohmann::json stamp(nlohmann::json record) const;

    std::vector<index::ScoredDoc> search(const std::string& query);
    // Multistage retrieval, then paragraph scores pooled per document.
    std::vector<rerank::DocumentScore> rank_documents(const std::string& query);
    evidence::EvidenceSet gather_evidence(const corpus::ClaimRecord& claim, std::size_t n);
    verdict::ClaimInputs inputs_for(const corpus::ClaimRecord& claim, const evidence::EvidenceSet& ev,
                                    const verdict::HeadConfig& head);

    // Flushes the encoder cache in record mode.
    void finish();

private:
    PipelineConfig config_;
    std::shared_ptr<encoder::EncoderClient> client_;
    std::unique_ptr<rerank::RelevanceScorer> scorer_;
    std::optional<index::InvertedIndex> index_;
    std::optional<std::vector<corpus::DocumentRecord>> documents_;
    std::unique_ptr<FileLock> cache_lock_;
};

std::filesystem::path index_file(const PipelineConfig& c);
std::filesystem::path documents_file(const PipelineConfig& c);

Records run_ingest(Pipeline& p, const std::filesystem::path& out);
Records run_index(Pipeline& p);
Records run_search(Pipeline& p, const std::string& query);
Records run_dedup(Pipeline& p, const std::filesystem::path& kept_out);
Records run_evidence(Pipeline& p, const std::optional<std::string>& claim_text, std::size_t n);
Records run_train(Pipeline& p);
Records run_evaluate(Pipeline& p);
nlohmann::json run_verify(Pipeline& p, const std::string& claim_text);

// Human-readable rendering of command records.
std::string pretty(const Records& records);

}  // namespace veracity::pipeline
