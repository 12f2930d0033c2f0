#include <algorithm>

#include "veracity/encoder/types.hpp"
#include "veracity/error.hpp"
#include "veracity/verdict/inputs.hpp"

namespace veracity::verdict {

std::array<double, 3> to_array(const encoder::NliTriplet& t) { return {t.contradiction, t.neutral, t.entailment}; }

EvidenceGraph build_evidence_graph(const std::vector<double>& claim_embedding,
                                   const std::vector<std::vector<double>>& evidence_embeddings,
                                   const std::vector<double>& claim_encoding,
                                   const std::vector<std::vector<double>>& evidence_encodings,
                                   const std::vector<std::array<double, 3>>& triplets, double threshold) {
    const std::size_t n = evidence_embeddings.size();
    if (evidence_encodings.size() != n || triplets.size() != n) {
        throw ShapeError("evidence graph: " + std::to_string(n) + " embeddings, " +
                         std::to_string(evidence_encodings.size()) + " encodings, " + std::to_string(triplets.size()) +
                         " triplets");
    }
    const std::size_t d = claim_encoding.size();
    if (d == 0) throw ShapeError("evidence graph: empty claim encoding");
    for (const auto& e : evidence_encodings) {
        if (e.size() != d) {
            throw ShapeError("evidence graph: encoding of size " + std::to_string(e.size()) + ", expected " +
                             std::to_string(d));
        }
    }

    EvidenceGraph g;
    g.features = nn::Tensor(n + 1, d + 3);
    for (std::size_t j = 0; j < d; ++j) g.features(0, j) = claim_encoding[j];
    g.features(0, d + 2) = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) g.features(i + 1, j) = evidence_encodings[i][j];
        for (std::size_t j = 0; j < 3; ++j) g.features(i + 1, d + j) = triplets[i][j];
    }

    std::vector<const std::vector<double>*> emb{&claim_embedding};
    for (const auto& e : evidence_embeddings) emb.push_back(&e);
    g.adjacency = nn::Tensor(n + 1, n + 1);
    for (std::size_t a = 0; a <= n; ++a) {
        for (std::size_t b = a + 1; b <= n; ++b) {
            const double s = encoder::cosine_similarity(*emb[a], *emb[b]);
            if (s > threshold) {
                g.adjacency(a, b) = g.adjacency(b, a) = 1.0;
                g.edges.push_back({a, b, s});
            }
        }
    }
    return g;
}

EvidenceGraph permute_evidence(const EvidenceGraph& graph, const std::vector<std::size_t>& order) {
    const std::size_t n = graph.nodes();
    if (order.size() + 1 != n) throw ShapeError("permute_evidence: order does not cover the evidence nodes");
    std::vector<std::size_t> old_of(n);  // new node -> old node
    old_of[0] = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (order[i] >= order.size()) throw InvalidArgument("permute_evidence: index out of range");
        old_of[i + 1] = order[i] + 1;
    }
    std::vector<std::size_t> new_of(n);
    for (std::size_t i = 0; i < n; ++i) new_of[old_of[i]] = i;

    EvidenceGraph out;
    out.features = nn::Tensor(n, graph.features.cols());
    out.adjacency = nn::Tensor(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < graph.features.cols(); ++j) out.features(i, j) = graph.features(old_of[i], j);
        for (std::size_t j = 0; j < n; ++j) out.adjacency(i, j) = graph.adjacency(old_of[i], old_of[j]);
    }
    for (const auto& e : graph.edges) {
        auto [a, b] = std::minmax(new_of[e.a], new_of[e.b]);
        out.edges.push_back({a, b, e.similarity});
    }
    std::sort(out.edges.begin(), out.edges.end(), [](const auto& x, const auto& y) {
        return std::tie(x.a, x.b) < std::tie(y.a, y.b);
    });
    return out;
}

}  // namespace veracity::verdict
