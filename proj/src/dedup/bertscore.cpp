#include "veracity/dedup/bertscore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "veracity/error.hpp"

namespace veracity::dedup {

namespace {

double best_match_mean(const TokenVectors& from, const TokenVectors& to) {
    double total = 0.0;
    for (const auto& f : from) {
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& t : to) best = std::max(best, encoder::cosine_similarity(f, t));
        total += best;
    }
    return total / static_cast<double>(from.size());
}

}  // namespace

double bertscore_f1(const TokenVectors& candidate, const TokenVectors& reference, double baseline) {
    if (candidate.empty() || reference.empty()) throw InvalidArgument("bertscore_f1: empty token sequence");
    if (!(baseline >= 0.0 && baseline < 1.0)) throw InvalidArgument("bertscore_f1: baseline must lie in [0, 1)");
    const auto dim = candidate.front().size();
    for (const auto* seq : {&candidate, &reference}) {
        for (const auto& v : *seq) {
            if (v.size() != dim) throw InvalidArgument("bertscore_f1: dimension mismatch");
        }
    }
    const double precision = best_match_mean(candidate, reference);
    const double recall = best_match_mean(reference, candidate);
    const double f1 = precision + recall == 0.0 ? 0.0 : 2.0 * precision * recall / (precision + recall);
    return (f1 - baseline) / (1.0 - baseline);
}

TokenVectors token_rows(const encoder::PairEncoding& encoding) {
    TokenVectors rows(encoding.token_count);
    for (std::size_t i = 0; i < encoding.token_count; ++i) {
        rows[i].assign(encoding.token(i), encoding.token(i) + encoding.dim);
    }
    return rows;
}

PairScore bertscore_pair_score(encoder::EncoderClient& client, double baseline) {
    return [&client, baseline](const corpus::ClaimRecord& a, const corpus::ClaimRecord& b) {
        auto ea = token_rows(client.encode_single(a.text));
        auto eb = token_rows(client.encode_single(b.text));
        return bertscore_f1(ea, eb, baseline);
    };
}

}  // namespace veracity::dedup
