#include "veracity/verdict/features.hpp"

#include <algorithm>

namespace veracity::verdict {

FeatureOptions FeatureOptions::for_head(const HeadConfig& head) {
    FeatureOptions o;
    o.pairs = head.pairs;
    o.graph_threshold = head.graph_threshold;
    switch (head.kind) {
        case HeadKind::NliSan: o.tokens = Tokens::All; break;
        case HeadKind::NliSent: o.tokens = Tokens::First; break;
        case HeadKind::Nli: o.tokens = Tokens::None; break;
        case HeadKind::NliPSent:
            o.tokens = Tokens::None;
            o.pooled = true;
            break;
        case HeadKind::NliGraph:
        case HeadKind::NliGraphAbl:
            o.pairs = 0;
            o.tokens = Tokens::None;
            o.graph = true;
            o.graph_evidence = head.pairs;
            break;
    }
    return o;
}

ClaimInputs featurize(const std::string& claim_id, const std::string& claim, const std::vector<std::string>& evidence,
                      encoder::EncoderClient& client, const FeatureOptions& options) {
    ClaimInputs in;
    in.claim_id = claim_id;

    const std::size_t n_pairs = std::min(options.pairs, evidence.size());
    if (n_pairs > 0) {
        std::vector<encoder::TextPair> pairs;
        for (std::size_t i = 0; i < n_pairs; ++i) pairs.push_back({claim, evidence[i]});
        const auto triplets = client.nli_batch(pairs);
        std::vector<encoder::PairEncoding> enc;
        if (options.tokens != FeatureOptions::Tokens::None || options.pooled) enc = client.encode_pairs(pairs);
        for (std::size_t i = 0; i < n_pairs; ++i) {
            PairInput p;
            p.nli = to_array(triplets[i]);
            if (!enc.empty()) {
                const auto& e = enc[i];
                if (options.tokens != FeatureOptions::Tokens::None && e.token_count > 0) {
                    const std::size_t rows = options.tokens == FeatureOptions::Tokens::All ? e.token_count : 1;
                    p.tokens = nn::Tensor(rows, e.dim,
                                          std::vector<double>(e.token_vectors.begin(),
                                                              e.token_vectors.begin() + static_cast<std::ptrdiff_t>(rows * e.dim)));
                }
                if (options.pooled) p.pooled = e.pooled;
            }
            in.pairs.push_back(std::move(p));
        }
    }

    if (options.graph) {
        const std::size_t n = std::min(options.graph_evidence, evidence.size());
        std::vector<std::string> texts{claim};
        std::vector<encoder::TextPair> pairs;
        for (std::size_t i = 0; i < n; ++i) {
            texts.push_back(evidence[i]);
            pairs.push_back({claim, evidence[i]});
        }
        const auto embeddings = client.embed_sentences(texts);
        const auto encodings = client.encode_singles(texts);
        const auto triplets = client.nli_batch(pairs);
        std::vector<std::vector<double>> ev_emb, ev_enc;
        std::vector<std::array<double, 3>> tri;
        for (std::size_t i = 0; i < n; ++i) {
            ev_emb.push_back(embeddings[i + 1].vector);
            ev_enc.push_back(encodings[i + 1].pooled);
            tri.push_back(to_array(triplets[i]));
        }
        in.graph = build_evidence_graph(embeddings[0].vector, ev_emb, encodings[0].pooled, ev_enc, tri,
                                        options.graph_threshold);
    }
    return in;
}

}  // namespace veracity::verdict
