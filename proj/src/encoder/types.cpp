#include "veracity/encoder/types.hpp"

#include <algorithm>
#include <cmath>

#include "veracity/error.hpp"

namespace veracity::encoder {

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw InvalidArgument("cosine_similarity: dimension mismatch");
    double dot = 0.0;
    double na = 0.0;
    double nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) throw InvalidArgument("cosine_similarity: zero vector");
    const double c = dot / (std::sqrt(na) * std::sqrt(nb));
    return std::clamp(c, -1.0, 1.0);
}

void validate_triplet(const NliTriplet& t) {
    for (double p : {t.contradiction, t.neutral, t.entailment}) {
        if (!std::isfinite(p) || p < 0.0 || p > 1.0) throw ServiceError("nli: probability outside [0,1]");
    }
    if (std::abs(t.contradiction + t.neutral + t.entailment - 1.0) > 1e-6) {
        throw ServiceError("nli: probabilities do not sum to 1");
    }
}

}  // namespace veracity::encoder
