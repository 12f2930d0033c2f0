#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace veracity::encoder {

struct SentenceEmbedding {
    std::vector<double> vector;
    std::string model_id;
};

// Encoder output for a (claim, evidence) pair or a single text.
struct PairEncoding {
    std::size_t dim = 0;
    std::vector<double> token_vectors;  // row-major, token_count x dim
    std::vector<double> pooled;         // dim
    std::size_t token_count = 0;
    std::string model_id;

    // Pointer to the first element of token row i.
    const double* token(std::size_t i) const { return token_vectors.data() + i * dim; }
};

struct NliTriplet {
    double contradiction = 0.0;
    double neutral = 1.0;
    double entailment = 0.0;

    bool operator==(const NliTriplet&) const = default;
};

struct TaggedEntity {
    std::size_t start = 0;  // byte offsets into the text
    std::size_t end = 0;
    std::string text;
    std::string kind;
};

// dot(a, b) / (|a| |b|). Throws on dimension mismatch or a zero vector.
double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);

// Throws ServiceError unless the three probabilities lie in [0,1] and sum to 1 +- 1e-6.
void validate_triplet(const NliTriplet& t);

}  // namespace veracity::encoder
