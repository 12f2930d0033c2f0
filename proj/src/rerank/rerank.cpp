#include "veracity/rerank/rerank.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "veracity/error.hpp"

namespace veracity::rerank {

std::vector<index::ScoredDoc> rerank(const RelevanceScorer& scorer, const std::string& query,
                                     const std::vector<index::ScoredDoc>& candidates, const PassageLookup& texts) {
    std::vector<index::ScoredDoc> out = candidates;
    for (auto& c : out) {
        double s = 0.0;
        try {
            s = scorer.score(query, texts(c));
        } catch (const std::exception& e) {
            throw ServiceError("rerank: scorer " + scorer.identity() + " failed on (query '" + query + "', paragraph " +
                               c.paragraph_id + "): " + e.what());
        }
        if (!std::isfinite(s) || s < 0.0 || s > 1.0) {
            throw ServiceError("rerank: scorer " + scorer.identity() + " returned " + std::to_string(s) +
                               " for paragraph " + c.paragraph_id);
        }
        c.score = s;
        c.stage = index::Stage::Reranked;
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.score > b.score; });
    return out;
}

std::vector<index::ScoredDoc> rerank(const RelevanceScorer& scorer, const std::string& query,
                                     const std::vector<index::ScoredDoc>& candidates,
                                     const index::InvertedIndex& index) {
    return rerank(scorer, query, candidates, [&](const index::ScoredDoc& d) { return index.text(d.slot); });
}

std::vector<index::ScoredDoc> multistage_retrieve(const index::InvertedIndex& index, const RelevanceScorer* scorer,
                                                  const std::string& query, const MultistageParams& params) {
    if (params.final_k == 0 || params.final_k > params.first_k) {
        throw InvalidArgument("multistage_retrieve: need 1 <= final_k <= first_k");
    }
    auto q = index::Query::from_text(query, index.analyzer());
    if (params.rm3) {
        auto feedback = index::bm25_search(index, q, params.rm3->fb_docs, params.bm25);
        if (!feedback.empty()) q = index::rm3_expand(index, q, feedback, *params.rm3);
    }
    auto candidates = index::bm25_search(index, q, params.first_k, params.bm25);
    if (scorer != nullptr) candidates = rerank(*scorer, query, candidates, index);
    if (candidates.size() > params.final_k) candidates.resize(params.final_k);
    return candidates;
}

std::vector<DocumentScore> aggregate_documents(const std::vector<index::ScoredDoc>& ranked) {
    std::vector<DocumentScore> docs;
    std::unordered_map<std::string, std::size_t> position;
    for (const auto& r : ranked) {
        auto [it, fresh] = position.emplace(r.doc_id, docs.size());
        if (fresh) {
            docs.push_back({r.doc_id, r.score, r.paragraph_id});
        } else if (r.score > docs[it->second].score) {
            docs[it->second].score = r.score;
            docs[it->second].best_paragraph_id = r.paragraph_id;
        }
    }
    std::stable_sort(docs.begin(), docs.end(), [](const auto& a, const auto& b) { return a.score > b.score; });
    return docs;
}

}  // namespace veracity::rerank
