#include "veracity/evidence/evidence.hpp"

#include <algorithm>
#include <map>

#include "veracity/corpus/text.hpp"
#include "veracity/error.hpp"

namespace veracity::evidence {

std::string_view to_string(SelectionPolicy policy) {
    return policy == SelectionPolicy::FlatTopN ? "flat_top_n" : "per_doc_top_m";
}

SelectionPolicy parse_selection_policy(std::string_view text) {
    if (text == "flat_top_n") return SelectionPolicy::FlatTopN;
    if (text == "per_doc_top_m") return SelectionPolicy::PerDocTopM;
    throw InvalidArgument("unknown evidence policy '" + std::string(text) + "'");
}

Embedder client_embedder(encoder::EncoderClient& client) {
    return [&client](const std::vector<std::string>& texts) {
        std::vector<std::vector<double>> out;
        for (auto& e : client.embed_sentences(texts)) out.push_back(std::move(e.vector));
        return out;
    };
}

bool ranks_before(const EvidenceSentence& a, const EvidenceSentence& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    if (a.doc_rank != b.doc_rank) return a.doc_rank < b.doc_rank;
    return a.position < b.position;
}

std::vector<EvidenceSentence> score_sentence_pool(const std::string& claim_text,
                                                  const std::vector<corpus::DocumentRecord>& ranked_docs,
                                                  const Embedder& embed, const EvidenceOptions& options) {
    std::vector<EvidenceSentence> pool;
    for (std::size_t rank = 0; rank < ranked_docs.size(); ++rank) {
        const auto& doc = ranked_docs[rank];
        const auto sentences = corpus::split_sentences(doc.text);
        for (std::size_t pos = 0; pos < sentences.size(); ++pos) {
            if (options.analyzer.tokenize(sentences[pos]).size() < options.min_tokens) continue;
            pool.push_back({sentences[pos], doc.id, doc.url, rank, pos, 0.0});
        }
    }
    if (pool.empty()) return pool;
    std::vector<std::string> texts{claim_text};
    for (const auto& s : pool) texts.push_back(s.text);
    std::vector<std::vector<double>> vectors;
    try {
        vectors = embed(texts);
    } catch (const InvalidArgument&) {
        throw;
    } catch (const CacheMiss&) {
        throw;
    } catch (const std::exception& e) {
        throw ServiceError(std::string("evidence: embedding failed: ") + e.what());
    }
    if (vectors.size() != texts.size()) throw ServiceError("evidence: embedder returned a misaligned batch");
    for (std::size_t i = 0; i < pool.size(); ++i) {
        pool[i].similarity = encoder::cosine_similarity(vectors[0], vectors[i + 1]);
    }
    return pool;
}

EvidenceSet retrieve_evidence_flat(const corpus::ClaimRecord& claim,
                                   const std::vector<corpus::DocumentRecord>& ranked_docs, std::size_t n,
                                   const Embedder& embed, const EvidenceOptions& options) {
    if (n < 1) throw InvalidArgument("retrieve_evidence_flat: n must be >= 1");
    auto pool = score_sentence_pool(claim.text, ranked_docs, embed, options);
    std::sort(pool.begin(), pool.end(), ranks_before);
    if (pool.size() > n) pool.resize(n);
    return {claim.id, SelectionPolicy::FlatTopN, std::move(pool)};
}

EvidenceSet retrieve_evidence_per_doc(const corpus::ClaimRecord& claim,
                                      const std::vector<corpus::DocumentRecord>& ranked_docs, std::size_t per_doc,
                                      const Embedder& embed, const EvidenceOptions& options) {
    if (per_doc < 1) throw InvalidArgument("retrieve_evidence_per_doc: per_doc must be >= 1");
    auto pool = score_sentence_pool(claim.text, ranked_docs, embed, options);
    std::map<std::size_t, std::vector<EvidenceSentence>> by_doc;
    for (auto& s : pool) by_doc[s.doc_rank].push_back(std::move(s));
    std::vector<EvidenceSentence> selected;
    for (auto& [rank, sentences] : by_doc) {
        std::sort(sentences.begin(), sentences.end(), ranks_before);
        const auto take = std::min(per_doc, sentences.size());
        std::move(sentences.begin(), sentences.begin() + static_cast<std::ptrdiff_t>(take),
                  std::back_inserter(selected));
    }
    std::sort(selected.begin(), selected.end(), ranks_before);
    return {claim.id, SelectionPolicy::PerDocTopM, std::move(selected)};
}

nlohmann::json to_json(const EvidenceSet& set) {
    nlohmann::json sentences = nlohmann::json::array();
    for (const auto& s : set.sentences) {
        sentences.push_back({{"text", s.text},
                             {"source_doc_id", s.source_doc_id},
                             {"source_url", s.source_url},
                             {"similarity", s.similarity}});
    }
    return {{"claim_id", set.claim_id}, {"policy", to_string(set.policy)}, {"sentences", sentences}};
}

}  // namespace veracity::evidence
