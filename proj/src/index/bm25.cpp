#include "veracity/index/bm25.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace veracity::index {

Query Query::from_text(std::string_view text, const Analyzer& analyzer) {
    Query q;
    for (auto& term : analyzer.analyze(text)) q.weights[std::move(term)] += 1.0;
    return q;
}

double Query::total_weight() const {
    double total = 0.0;
    for (const auto& [term, w] : weights) total += w;
    return total;
}

Query Query::normalized() const {
    Query q;
    const double total = total_weight();
    if (total <= 0.0) return q;
    for (const auto& [term, w] : weights) {
        if (w > 0.0) q.weights.emplace(term, w / total);
    }
    return q;
}

std::string_view to_string(Stage stage) { return stage == Stage::Bm25 ? "bm25" : "reranked"; }

double bm25_idf(std::size_t doc_count, std::size_t df) {
    const auto n = static_cast<double>(doc_count);
    const auto f = static_cast<double>(df);
    return std::log(1.0 + (n - f + 0.5) / (f + 0.5));
}

namespace {

void validate(const Query& query, std::size_t k, Bm25Params params) {
    if (k == 0) throw InvalidArgument("bm25_search: k must be >= 1");
    if (!(params.k1 > 0.0)) throw InvalidArgument("bm25_search: k1 must be > 0");
    if (!(params.b >= 0.0 && params.b <= 1.0)) throw InvalidArgument("bm25_search: b must lie in [0, 1]");
    if (query.empty()) throw InvalidArgument("bm25_search: empty query after analysis");
    for (const auto& [term, w] : query.weights) {
        if (!std::isfinite(w) || w < 0.0) throw InvalidArgument("bm25_search: query weights must be finite and >= 0");
    }
}

double term_score(double weight, double idf, double tf, double length, double avg_length, Bm25Params p) {
    const double norm = p.k1 * (1.0 - p.b + p.b * length / avg_length);
    return weight * idf * tf * (p.k1 + 1.0) / (tf + norm);
}

std::vector<ScoredDoc> top_k(const InvertedIndex& index, const std::vector<double>& scores, std::size_t k) {
    std::vector<DocSlot> hits;
    for (DocSlot d = 0; d < scores.size(); ++d) {
        if (scores[d] > 0.0) hits.push_back(d);
    }
    // Slot order equals paragraph-id order.
    const auto better = [&](DocSlot a, DocSlot b) { return scores[a] != scores[b] ? scores[a] > scores[b] : a < b; };
    const auto n = std::min(k, hits.size());
    std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(n), hits.end(), better);
    std::vector<ScoredDoc> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        DocSlot d = hits[i];
        out.push_back({index.paragraph_id(d), index.doc_id(d), d, scores[d], Stage::Bm25});
    }
    return out;
}

}  // namespace

std::vector<ScoredDoc> bm25_search(const InvertedIndex& index, const Query& query, std::size_t k, Bm25Params params) {
    validate(query, k, params);
    if (index.doc_count() == 0) return {};
    std::vector<double> scores(index.doc_count(), 0.0);
    const double avg = index.avg_doc_length();
    for (const auto& [term, weight] : query.weights) {
        const auto& list = index.postings(term);
        if (list.empty() || weight == 0.0) continue;
        const double idf = bm25_idf(index.doc_count(), list.size());
        for (const auto& p : list) {
            scores[p.doc] += term_score(weight, idf, p.tf, index.doc_length(p.doc), avg, params);
        }
    }
    return top_k(index, scores, k);
}

std::vector<ScoredDoc> bm25_search_exhaustive(const InvertedIndex& index, const Query& query, std::size_t k,
                                              Bm25Params params) {
    validate(query, k, params);
    if (index.doc_count() == 0) return {};
    // Query terms in the same (lexicographic) order bm25_search accumulates them.
    struct QueryTerm {
        TermId id;
        double weight;
        double idf;
    };
    std::vector<QueryTerm> terms;
    for (const auto& [term, weight] : query.weights) {
        auto id = index.term_id(term);
        if (!id || weight == 0.0) continue;
        terms.push_back({*id, weight, bm25_idf(index.doc_count(), index.postings(*id).size())});
    }
    const double avg = index.avg_doc_length();
    const auto n = static_cast<std::ptrdiff_t>(index.doc_count());
    std::vector<double> scores(index.doc_count(), 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto d = static_cast<DocSlot>(i);
        const auto& row = index.doc_terms(d);
        double s = 0.0;
        for (const auto& qt : terms) {
            auto it = std::lower_bound(row.begin(), row.end(), qt.id,
                                       [](const TermFrequency& tf, TermId t) { return tf.term < t; });
            if (it == row.end() || it->term != qt.id) continue;
            s += term_score(qt.weight, qt.idf, it->tf, index.doc_length(d), avg, params);
        }
        scores[d] = s;
    }
    return top_k(index, scores, k);
}

Query rm3_expand(const InvertedIndex& index, const Query& query, const std::vector<ScoredDoc>& feedback,
                 Rm3Params params) {
    if (params.fb_docs < 1 || params.fb_terms < 1) throw InvalidArgument("rm3_expand: fb_docs and fb_terms must be >= 1");
    if (!(params.original_weight >= 0.0 && params.original_weight <= 1.0)) {
        throw InvalidArgument("rm3_expand: original_weight must lie in [0, 1]");
    }
    if (feedback.empty()) throw InvalidArgument("rm3_expand: feedback list is empty");
    if (query.empty()) throw InvalidArgument("rm3_expand: empty query");

    const Query original = query.normalized();
    if (params.original_weight == 1.0) return original;

    const auto used = std::min(params.fb_docs, feedback.size());
    double max_score = feedback[0].score;
    for (std::size_t i = 0; i < used; ++i) max_score = std::max(max_score, feedback[i].score);
    std::vector<double> doc_weight(used);
    double z = 0.0;
    for (std::size_t i = 0; i < used; ++i) {
        doc_weight[i] = std::exp(feedback[i].score - max_score);
        z += doc_weight[i];
    }

    std::unordered_map<TermId, double> relevance;
    for (std::size_t i = 0; i < used; ++i) {
        auto slot = index.slot_of(feedback[i].paragraph_id);
        if (!slot) throw InvalidArgument("rm3_expand: unknown feedback paragraph " + feedback[i].paragraph_id);
        const double len = index.doc_length(*slot);
        if (len == 0.0) continue;
        for (const auto& tf : index.doc_terms(*slot)) {
            relevance[tf.term] += (doc_weight[i] / z) * (tf.tf / len);
        }
    }

    std::vector<std::pair<std::string, double>> ranked;
    for (const auto& [term, p] : relevance) {
        const auto& text = index.term(term);
        if (p > 0.0 && !index.analyzer().is_stopword(text)) ranked.emplace_back(text, p);
    }
    std::sort(ranked.begin(), ranked.end(),
              [](const auto& a, const auto& b) { return a.second != b.second ? a.second > b.second : a.first < b.first; });
    if (ranked.size() > params.fb_terms) ranked.resize(params.fb_terms);
    double mass = 0.0;
    for (const auto& [term, p] : ranked) mass += p;

    const double alpha = params.original_weight;
    Query expanded;
    for (const auto& [term, w] : original.weights) expanded.weights[term] += alpha * w;
    if (mass > 0.0) {
        for (const auto& [term, p] : ranked) expanded.weights[term] += (1.0 - alpha) * p / mass;
    } else {
        // Feedback carried no usable terms: fall back to the original query alone.
        return original;
    }
    std::erase_if(expanded.weights, [](const auto& kv) { return kv.second <= 0.0; });
    return expanded;
}

}  // namespace veracity::index
