#include "veracity/encoder/hashing_backend.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace veracity::encoder {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

const std::set<std::string>& negations() {
    static const std::set<std::string> words = {"not", "no", "never", "false", "fake", "myth", "hoax", "debunked", "cannot", "doesn", "isn", "won"};
    return words;
}

bool has_negation(const std::vector<std::string>& tokens) {
    return std::any_of(tokens.begin(), tokens.end(), [](const std::string& t) { return negations().contains(t); });
}

std::vector<double> normalized(std::vector<double> v) {
    double n = 0.0;
    for (double x : v) n += x * x;
    n = std::sqrt(n);
    if (n > 0.0) {
        for (auto& x : v) x /= n;
    }
    return v;
}

}  // namespace

std::uint64_t fnv1a(std::string_view data, std::uint64_t basis) {
    std::uint64_t h = basis;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

double term_overlap(const index::Analyzer& analyzer, std::string_view query, std::string_view passage) {
    auto q = analyzer.analyze(query);
    auto p = analyzer.analyze(passage);
    std::set<std::string> qs(q.begin(), q.end());
    std::set<std::string> ps(p.begin(), p.end());
    if (qs.empty()) return 0.0;
    std::size_t shared = 0;
    for (const auto& t : qs) shared += ps.count(t);
    return static_cast<double>(shared) / static_cast<double>(qs.size());
}

HashingBackend::HashingBackend(HashingOptions options)
    : options_(options), analyzer_(index::AnalyzerConfig::english()) {}

ModelIds HashingBackend::models() const {
    const std::string tag = "fixture-hash-v1/";
    const std::string dims = "@" + std::to_string(options_.embed_dim) + "x" + std::to_string(options_.encoder_dim) +
                             "/seed" + std::to_string(options_.seed);
    return {tag + "embedder" + dims, tag + "pair-encoder" + dims, tag + "nli" + dims,
            tag + "reranker" + dims, tag + "ner" + dims,          tag + "tokenizer" + dims};
}

std::vector<double> HashingBackend::word_vector(const std::string& word, std::size_t dim, std::uint64_t salt) const {
    std::uint64_t state = fnv1a(word, fnv1a(std::to_string(options_.seed ^ salt)));
    std::vector<double> v(dim);
    for (auto& x : v) {
        // Uniform in [-1, 1) from the top 53 bits.
        x = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-52 - 1.0;
    }
    return v;
}

std::vector<SentenceEmbedding> HashingBackend::embed(const std::vector<std::string>& texts) {
    std::vector<SentenceEmbedding> out;
    const auto id = models().embedder;
    for (const auto& text : texts) {
        auto tokens = analyzer_.analyze(text);
        if (tokens.empty()) tokens = analyzer_.tokenize(text);
        if (tokens.empty()) tokens.push_back(text);
        std::vector<double> v(options_.embed_dim, 0.0);
        for (const auto& t : tokens) {
            auto w = word_vector(t, options_.embed_dim, 1);
            for (std::size_t i = 0; i < v.size(); ++i) v[i] += w[i];
        }
        out.push_back({normalized(std::move(v)), id});
    }
    return out;
}

PairEncoding HashingBackend::encode_tokens(std::vector<std::string> tokens) const {
    const std::size_t d = options_.encoder_dim;
    PairEncoding e;
    e.dim = d;
    e.token_count = tokens.size();
    e.token_vectors.assign(tokens.size() * d, 0.0);
    e.pooled.assign(d, 0.0);
    for (std::size_t i = 1; i < tokens.size(); ++i) {
        auto w = word_vector(tokens[i], d, 2);
        auto pos = word_vector("#pos" + std::to_string(i), d, 3);
        for (std::size_t j = 0; j < d; ++j) {
            e.token_vectors[i * d + j] = w[j] + 0.1 * pos[j];
            e.pooled[j] += w[j];
        }
    }
    // The leading <s> row summarizes the sequence, like a contextual first token.
    const double n = static_cast<double>(std::max<std::size_t>(1, tokens.size() - 1));
    for (std::size_t j = 0; j < d; ++j) {
        e.token_vectors[j] = e.pooled[j] / n;
        e.pooled[j] = std::tanh(e.pooled[j] / n);
    }
    e.model_id = models().pair_encoder;
    return e;
}

std::vector<PairEncoding> HashingBackend::encode_pairs(const std::vector<TextPair>& pairs) {
    std::vector<PairEncoding> out;
    for (const auto& [claim, evidence] : pairs) {
        auto c = analyzer_.tokenize(claim);
        auto ev = analyzer_.tokenize(evidence);
        const std::size_t budget = options_.max_sequence;
        // Truncate the evidence side first; 3 slots go to <s> and the separators.
        if (c.size() + ev.size() + 3 > budget) {
            std::size_t keep_c = std::min(c.size(), budget > 3 ? budget - 3 : 0);
            c.resize(keep_c);
            ev.resize(std::min(ev.size(), budget - 3 - keep_c));
        }
        std::vector<std::string> tokens{"<s>"};
        tokens.insert(tokens.end(), c.begin(), c.end());
        tokens.emplace_back("</s>");
        tokens.insert(tokens.end(), ev.begin(), ev.end());
        tokens.emplace_back("</s>");
        out.push_back(encode_tokens(std::move(tokens)));
    }
    return out;
}

std::vector<PairEncoding> HashingBackend::encode_singles(const std::vector<std::string>& texts) {
    std::vector<PairEncoding> out;
    for (const auto& text : texts) {
        auto t = analyzer_.tokenize(text);
        if (t.size() + 2 > options_.max_sequence) t.resize(options_.max_sequence - 2);
        std::vector<std::string> tokens{"<s>"};
        tokens.insert(tokens.end(), t.begin(), t.end());
        tokens.emplace_back("</s>");
        out.push_back(encode_tokens(std::move(tokens)));
    }
    return out;
}

std::vector<NliTriplet> HashingBackend::nli(const std::vector<TextPair>& pairs) {
    std::vector<NliTriplet> out;
    for (const auto& [claim, evidence] : pairs) {
        const double overlap = term_overlap(analyzer_, claim, evidence);
        const bool flipped = has_negation(analyzer_.tokenize(claim)) != has_negation(analyzer_.tokenize(evidence));
        const double entail = flipped ? 0.0 : 5.0 * overlap;
        const double contra = flipped ? 5.0 * overlap : 0.0;
        const double neutral = 2.5 * (1.0 - overlap);
        const double m = std::max({entail, contra, neutral});
        const double ec = std::exp(contra - m);
        const double en = std::exp(neutral - m);
        const double ee = std::exp(entail - m);
        const double z = ec + en + ee;
        out.push_back({ec / z, en / z, ee / z});
    }
    return out;
}

std::vector<double> HashingBackend::rerank(const std::string& query, const std::vector<std::string>& passages) {
    std::vector<double> out;
    for (const auto& p : passages) {
        const double overlap = term_overlap(analyzer_, query, p);
        out.push_back(1.0 / (1.0 + std::exp(-8.0 * (overlap - 0.5))));
    }
    return out;
}

std::vector<std::vector<TaggedEntity>> HashingBackend::ner(const std::vector<std::string>& texts) {
    return std::vector<std::vector<TaggedEntity>>(texts.size());
}

std::vector<std::size_t> HashingBackend::tokenize_count(const std::vector<std::string>& texts) {
    std::vector<std::size_t> out;
    for (const auto& t : texts) out.push_back(analyzer_.tokenize(t).size());
    return out;
}

}  // namespace veracity::encoder
