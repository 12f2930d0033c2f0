#include "veracity/dedup/dedup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <unordered_map>

#include <json.hpp>

#include "veracity/corpus/text.hpp"
#include "veracity/error.hpp"

namespace veracity::dedup {

std::string_view to_string(Preset preset) {
    switch (preset) {
        case Preset::Large: return "large";
        case Preset::Small: return "small";
        case Preset::Custom: return "custom";
    }
    return "custom";
}

Preset parse_preset(std::string_view text) {
    if (text == "large") return Preset::Large;
    if (text == "small") return Preset::Small;
    if (text == "custom") return Preset::Custom;
    throw InvalidArgument("unknown dedup preset '" + std::string(text) + "'");
}

DedupConfig DedupConfig::large() { return {0.99, 20, Preset::Large}; }
DedupConfig DedupConfig::small() { return {0.90, 20, Preset::Small}; }

DedupConfig DedupConfig::for_preset(Preset preset) {
    switch (preset) {
        case Preset::Large: return large();
        case Preset::Small: return small();
        case Preset::Custom: break;
    }
    throw InvalidArgument("custom preset has no default threshold");
}

void DedupConfig::validate() const {
    if (!(threshold > 0.0 && threshold <= 1.0)) throw InvalidArgument("dedup threshold must lie in (0, 1]");
    if (candidate_k < 1) throw InvalidArgument("dedup candidate_k must be >= 1");
}

std::string_view to_string(Policy policy) {
    return policy == Policy::EarlierMatch ? "earlier_match" : "greedy_first_kept";
}

Policy parse_policy(std::string_view text) {
    if (text == "earlier_match") return Policy::EarlierMatch;
    if (text == "greedy_first_kept") return Policy::GreedyFirstKept;
    throw InvalidArgument("unknown dedup policy '" + std::string(text) + "'");
}

LabelCounts count_labels(const std::vector<corpus::ClaimRecord>& claims) {
    LabelCounts c;
    for (const auto& claim : claims) {
        (claim.label == corpus::Label::True ? c.true_count : c.false_count) += 1;
    }
    return c;
}

index::InvertedIndex build_claim_index(const std::vector<corpus::ClaimRecord>& claims, index::AnalyzerConfig config) {
    std::vector<corpus::Paragraph> paragraphs;
    paragraphs.reserve(claims.size());
    for (const auto& c : claims) {
        paragraphs.push_back({c.id, 0, c.text, corpus::whitespace_tokens(c.text).size()});
    }
    return index::InvertedIndex::build(paragraphs, std::move(config));
}

std::vector<SimilarityPair> score_candidate_pairs(const std::vector<corpus::ClaimRecord>& claims,
                                                  const index::InvertedIndex& claim_index,
                                                  const rerank::RelevanceScorer& scorer, std::size_t candidate_k,
                                                  index::Bm25Params bm25) {
    if (candidate_k < 1) throw InvalidArgument("candidate_k must be >= 1");
    std::unordered_map<std::string, const corpus::ClaimRecord*> by_id;
    for (const auto& c : claims) by_id.emplace(c.id, &c);

    std::map<std::pair<std::string, std::string>, double> scored;
    for (const auto& claim : claims) {
        auto query = index::Query::from_text(claim.text, claim_index.analyzer());
        if (query.empty()) continue;
        auto hits = index::bm25_search(claim_index, query, candidate_k + 1, bm25);
        std::size_t taken = 0;
        for (const auto& hit : hits) {
            if (hit.doc_id == claim.id) continue;
            if (taken++ == candidate_k) break;
            auto other = by_id.find(hit.doc_id);
            if (other == by_id.end()) throw InvalidArgument("claim index holds unknown claim " + hit.doc_id);
            auto key = claim.id < hit.doc_id ? std::pair{claim.id, hit.doc_id} : std::pair{hit.doc_id, claim.id};
            if (scored.contains(key)) continue;
            const auto& a = *by_id.at(key.first);
            const auto& b = *by_id.at(key.second);
            double p = 0.0;
            try {
                p = scorer.score(a.text, b.text);
            } catch (const std::exception& e) {
                throw ServiceError("dedup: scorer failed on (" + key.first + ", " + key.second + "): " + e.what());
            }
            if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
                throw ServiceError("dedup: scorer returned out-of-range probability for (" + key.first + ", " +
                                   key.second + ")");
            }
            scored.emplace(std::move(key), p);
        }
    }
    std::vector<SimilarityPair> out;
    out.reserve(scored.size());
    for (const auto& [key, p] : scored) out.push_back({key.first, key.second, p});
    return out;
}

std::vector<SimilarityPair> filter_pairs(const std::vector<SimilarityPair>& scored, double threshold) {
    std::vector<SimilarityPair> out;
    std::copy_if(scored.begin(), scored.end(), std::back_inserter(out),
                 [&](const SimilarityPair& p) { return p.probability >= threshold; });
    return out;
}

std::vector<SimilarityPair> find_similar_pairs(const std::vector<corpus::ClaimRecord>& claims,
                                               const index::InvertedIndex& claim_index,
                                               const rerank::RelevanceScorer& scorer, std::size_t candidate_k,
                                               double threshold, index::Bm25Params bm25) {
    DedupConfig{threshold, candidate_k, Preset::Custom}.validate();
    return filter_pairs(score_candidate_pairs(claims, claim_index, scorer, candidate_k, bm25), threshold);
}

DedupReport deduplicate(const std::vector<corpus::ClaimRecord>& claims, const std::vector<SimilarityPair>& pairs,
                        Policy policy) {
    std::map<std::string, const corpus::ClaimRecord*> ordered;
    for (const auto& c : claims) ordered.emplace(c.id, &c);

    // Earlier partners of each claim, keyed by partner id.
    std::map<std::string, std::map<std::string, SimilarityPair>> earlier;
    for (const auto& p : pairs) {
        if (!ordered.contains(p.a) || !ordered.contains(p.b)) {
            throw InvalidArgument("deduplicate: pair (" + p.a + ", " + p.b + ") references an unknown claim");
        }
        if (p.a == p.b) throw InvalidArgument("deduplicate: self pair for " + p.a);
        const auto& [lo, hi] = p.a < p.b ? std::pair{p.a, p.b} : std::pair{p.b, p.a};
        earlier[hi].emplace(lo, SimilarityPair{lo, hi, p.probability});
    }

    DedupReport report;
    std::set<std::string> kept;
    std::vector<const corpus::ClaimRecord*> kept_records;
    for (const auto& [id, record] : ordered) {
        const SimilarityPair* trigger = nullptr;
        if (auto it = earlier.find(id); it != earlier.end()) {
            for (const auto& [partner, pair] : it->second) {
                if (policy == Policy::EarlierMatch || kept.contains(partner)) {
                    trigger = &pair;
                    break;
                }
            }
        }
        if (trigger != nullptr) {
            report.removed.push_back({id, *trigger});
        } else {
            kept.insert(id);
            report.kept.push_back(id);
            kept_records.push_back(record);
        }
    }
    report.before = count_labels(claims);
    for (const auto* r : kept_records) {
        (r->label == corpus::Label::True ? report.after.true_count : report.after.false_count) += 1;
    }
    return report;
}

SimilarityStats summarize(std::vector<double> values) {
    if (values.empty()) throw InvalidArgument("summarize: no values");
    const auto n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    SimilarityStats s;
    s.mean = sum / n;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.std = std::sqrt(ss / (n - 1.0));
    }
    std::sort(values.begin(), values.end());
    const auto rank = static_cast<std::size_t>(std::ceil(0.9 * n));
    s.p90 = values[std::max<std::size_t>(rank, 1) - 1];
    return s;
}

SimilarityStats similarity_stats(const std::vector<corpus::ClaimRecord>& claims, const PairScore& score) {
    if (claims.size() < 2) throw InvalidArgument("similarity_stats: need at least 2 claims");
    std::vector<double> best(claims.size(), -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < claims.size(); ++i) {
        for (std::size_t j = 0; j < claims.size(); ++j) {
            if (i != j) best[i] = std::max(best[i], score(claims[i], claims[j]));
        }
    }
    return summarize(std::move(best));
}

void write_report_records(std::ostream& out, const DedupReport& report, std::string_view preset) {
    using nlohmann::json;
    for (const auto& id : report.kept) {
        out << json{{"record", "kept"}, {"preset", preset}, {"id", id}}.dump() << '\n';
    }
    for (const auto& r : report.removed) {
        out << json{{"record", "removed"},
                    {"preset", preset},
                    {"id", r.id},
                    {"trigger", {{"a", r.trigger.a}, {"b", r.trigger.b}, {"probability", r.trigger.probability}}}}
                   .dump()
            << '\n';
    }
}

}  // namespace veracity::dedup
