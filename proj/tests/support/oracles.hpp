#pragma once

// Independent straight-line reimplementations used as test oracles. Nothing
// here calls into the nn tape or the index scoring code.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "veracity/corpus/records.hpp"
#include "veracity/index/analyzer.hpp"
#include "veracity/nn/tensor.hpp"
#include "veracity/verdict/heads.hpp"
#include "veracity/verdict/inputs.hpp"

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

inline Matrix to_matrix(const veracity::nn::Tensor& t) {
    Matrix m(t.rows(), std::vector<double>(t.cols()));
    for (std::size_t r = 0; r < t.rows(); ++r)
        for (std::size_t c = 0; c < t.cols(); ++c) m[r][c] = t(r, c);
    return m;
}

inline Matrix mul(const Matrix& a, const Matrix& b) {
    const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    Matrix out(n, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            long double s = 0.0L;
            for (std::size_t p = 0; p < k; ++p) s += static_cast<long double>(a[i][p]) * b[p][j];
            out[i][j] = static_cast<double>(s);
        }
    return out;
}

inline Matrix transpose(const Matrix& a) {
    if (a.empty()) return {};
    Matrix out(a[0].size(), std::vector<double>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[0].size(); ++j) out[j][i] = a[i][j];
    return out;
}

inline std::vector<double> softmax(const std::vector<double>& x) {
    double mx = -INFINITY;
    for (double v : x) mx = std::max(mx, v);
    std::vector<double> e(x.size());
    double z = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) z += e[i] = std::exp(x[i] - mx);
    for (double& v : e) v /= z;
    return e;
}

// Single-query attention: q (1 x d) over rows of k and v.
inline std::vector<double> attend(const std::vector<double>& q, const Matrix& k, const Matrix& v,
                                  const std::vector<bool>& mask) {
    const double d = static_cast<double>(q.size());
    std::vector<double> logits;
    std::vector<std::size_t> live;
    for (std::size_t r = 0; r < k.size(); ++r) {
        if (!mask.empty() && !mask[r]) continue;
        double s = 0.0;
        for (std::size_t j = 0; j < q.size(); ++j) s += q[j] * k[r][j];
        logits.push_back(s / std::sqrt(d));
        live.push_back(r);
    }
    std::vector<double> out(v.empty() ? q.size() : v[0].size(), 0.0);
    if (live.empty()) return out;
    const auto w = softmax(logits);
    for (std::size_t i = 0; i < live.size(); ++i)
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += w[i] * v[live[i]][j];
    return out;
}

// D^-1/2 (A + I) D^-1/2 built entry by entry.
inline Matrix gcn_normalize(const Matrix& adj) {
    const std::size_t n = adj.size();
    std::vector<double> deg(n, 1.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) deg[i] += adj[i][j];
    Matrix out(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double a = (i == j ? 1.0 : 0.0) + adj[i][j];
            out[i][j] = a / std::sqrt(deg[i] * deg[j]);
        }
    return out;
}

inline std::vector<double> mlp(const std::vector<double>& x, const veracity::verdict::Head& head) {
    std::map<std::string, Matrix> p;
    for (const auto* param : head.parameters()) p[param->name] = to_matrix(param->value);
    auto h = mul(Matrix{x}, p.at("mlp.w1"))[0];
    for (std::size_t j = 0; j < h.size(); ++j) h[j] = std::max(0.0, h[j] + p.at("mlp.b1")[0][j]);
    auto o = mul(Matrix{h}, p.at("mlp.w2"))[0];
    for (std::size_t j = 0; j < o.size(); ++j) o[j] += p.at("mlp.b2")[0][j];
    return softmax(o);
}

inline Matrix param(const veracity::verdict::Head& head, const std::string& name) {
    for (const auto* p : head.parameters())
        if (p->name == name) return to_matrix(p->value);
    throw std::runtime_error("oracle: no parameter " + name);
}

// NLI-SAN forward: per pair, attention of (triplet W_Q) over (S W_K, S W_V);
// padded pairs contribute zeros; outputs concatenated into the MLP.
inline std::vector<double> san_forward(const veracity::verdict::Head& head,
                                       const veracity::verdict::ClaimInputs& in) {
    const auto& c = head.config();
    const Matrix wq = param(head, "san.w_q"), wk = param(head, "san.w_k"), wv = param(head, "san.w_v");
    std::vector<double> features;
    for (std::size_t i = 0; i < c.pairs; ++i) {
        if (i >= in.pairs.size()) {
            features.insert(features.end(), c.encoder_dim, 0.0);
            continue;
        }
        const auto& p = in.pairs[i];
        const Matrix s = to_matrix(p.tokens);
        const auto q = mul(Matrix{{p.nli[0], p.nli[1], p.nli[2]}}, wq)[0];
        const auto out = attend(q, mul(s, wk), mul(s, wv), p.token_mask);
        features.insert(features.end(), out.begin(), out.end());
    }
    return mlp(features, head);
}

// NLI-graph forward: relu(N X W + b), mean over nodes, MLP.
inline std::vector<double> graph_forward(const veracity::verdict::Head& head,
                                         const veracity::verdict::ClaimInputs& in) {
    const auto& g = *in.graph;
    Matrix x = to_matrix(g.features);
    if (head.kind() == veracity::verdict::HeadKind::NliGraphAbl) {
        for (auto& row : x) row = {row.end() - 3, row.end()};
    }
    const Matrix h0 = mul(mul(gcn_normalize(to_matrix(g.adjacency)), x), param(head, "gcn.w"));
    const Matrix b = param(head, "gcn.b");
    std::vector<double> pooled(h0[0].size(), 0.0);
    for (const auto& row : h0)
        for (std::size_t j = 0; j < row.size(); ++j) {
            double v = row[j] + b[0][j];
            if (head.config().gcn_relu) v = std::max(0.0, v);
            pooled[j] += v / static_cast<double>(h0.size());
        }
    return mlp(pooled, head);
}

struct BruteHit {
    std::string paragraph_id;
    double score;
};

// Every paragraph's analyzed text; no index involved.
struct BruteCorpus {
    std::vector<std::string> ids;
    std::vector<std::vector<std::string>> docs;
    double avg_len = 0.0;
};

inline BruteCorpus analyze_all(const std::vector<veracity::corpus::Paragraph>& paragraphs,
                               const veracity::index::Analyzer& analyzer) {
    BruteCorpus c;
    double total = 0.0;
    for (const auto& p : paragraphs) {
        c.ids.push_back(p.id());
        c.docs.push_back(analyzer.analyze(p.text));
        total += static_cast<double>(c.docs.back().size());
    }
    c.avg_len = total / static_cast<double>(c.docs.size());
    return c;
}

// BM25 by rescanning every analyzed paragraph.
inline std::vector<BruteHit> brute_bm25(const BruteCorpus& corpus, const std::map<std::string, double>& query,
                                        std::size_t k, double k1, double b) {
    const auto& docs = corpus.docs;
    const double n = static_cast<double>(docs.size());
    std::map<std::string, double> df;
    for (const auto& [term, w] : query) {
        for (const auto& doc : docs) df[term] += std::count(doc.begin(), doc.end(), term) > 0 ? 1.0 : 0.0;
    }
    std::vector<BruteHit> hits;
    for (std::size_t d = 0; d < docs.size(); ++d) {
        double score = 0.0;
        for (const auto& [term, w] : query) {
            const double tf = static_cast<double>(std::count(docs[d].begin(), docs[d].end(), term));
            if (tf == 0.0) continue;
            const double idf = std::log(1.0 + (n - df[term] + 0.5) / (df[term] + 0.5));
            const double len = static_cast<double>(docs[d].size());
            score += w * idf * tf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * len / corpus.avg_len));
        }
        if (score > 0.0) hits.push_back({corpus.ids[d], score});
    }
    std::sort(hits.begin(), hits.end(), [](const BruteHit& x, const BruteHit& y) {
        return x.score != y.score ? x.score > y.score : x.paragraph_id < y.paragraph_id;
    });
    if (hits.size() > k) hits.resize(k);
    return hits;
}

inline std::vector<BruteHit> brute_bm25(const std::vector<veracity::corpus::Paragraph>& paragraphs,
                                        const veracity::index::Analyzer& analyzer,
                                        const std::map<std::string, double>& query, std::size_t k, double k1,
                                        double b) {
    return brute_bm25(analyze_all(paragraphs, analyzer), query, k, k1, b);
}

// Paragraphs of random words drawn from a small Zipf-ish vocabulary.
inline std::vector<veracity::corpus::Paragraph> random_paragraphs(std::size_t count, std::mt19937_64& rng,
                                                                  std::size_t vocab = 60) {
    std::vector<veracity::corpus::Paragraph> out;
    std::uniform_int_distribution<std::size_t> len(1, 25);
    std::geometric_distribution<std::size_t> word(0.08);
    for (std::size_t i = 0; i < count; ++i) {
        std::string text;
        const std::size_t n = len(rng);
        for (std::size_t w = 0; w < n; ++w) {
            if (w) text += ' ';
            text += "w" + std::to_string(word(rng) % vocab);
        }
        std::string id = std::to_string(i);
        id.insert(0, id.size() < 5 ? 5 - id.size() : 0, '0');
        out.push_back({"d" + id, 0, text, n});
    }
    return out;
}

inline std::map<std::string, double> random_query(std::mt19937_64& rng, std::size_t vocab = 60) {
    std::map<std::string, double> q;
    std::uniform_int_distribution<std::size_t> terms(1, 4), word(0, vocab + 5);
    std::uniform_real_distribution<double> w(0.5, 2.0);
    const std::size_t n = terms(rng);
    for (std::size_t i = 0; i < n; ++i) q["w" + std::to_string(word(rng))] += w(rng);
    return q;
}

inline veracity::nn::Tensor random_tensor(std::size_t rows, std::size_t cols, std::mt19937_64& rng,
                                          double scale = 1.0) {
    std::normal_distribution<double> dist(0.0, scale);
    veracity::nn::Tensor t(rows, cols);
    for (double& v : t.values()) v = dist(rng);
    return t;
}

inline std::array<double, 3> random_triplet(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    std::array<double, 3> t{u(rng), u(rng), u(rng)};
    const double s = t[0] + t[1] + t[2];
    for (double& v : t) v /= s;
    return t;
}

// Random symmetric 0/1 adjacency with zero diagonal.
inline veracity::nn::Tensor random_adjacency(std::size_t n, std::mt19937_64& rng, double p = 0.35) {
    std::bernoulli_distribution edge(p);
    veracity::nn::Tensor a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (edge(rng)) a(i, j) = a(j, i) = 1.0;
    return a;
}

inline veracity::verdict::ClaimInputs random_san_inputs(std::size_t pairs, std::size_t tokens, std::size_t d,
                                                        std::mt19937_64& rng, bool ragged = false) {
    veracity::verdict::ClaimInputs in;
    in.claim_id = "rand";
    std::uniform_int_distribution<std::size_t> len(1, tokens);
    for (std::size_t i = 0; i < pairs; ++i) {
        veracity::verdict::PairInput p;
        p.tokens = random_tensor(tokens, d, rng);
        if (ragged) {
            const std::size_t real = len(rng);
            p.token_mask.assign(tokens, false);
            for (std::size_t r = 0; r < real; ++r) p.token_mask[r] = true;
        }
        p.nli = random_triplet(rng);
        in.pairs.push_back(std::move(p));
    }
    return in;
}

inline veracity::verdict::ClaimInputs random_graph_inputs(std::size_t nodes, std::size_t d, std::mt19937_64& rng) {
    veracity::verdict::ClaimInputs in;
    in.claim_id = "rand";
    veracity::verdict::EvidenceGraph g;
    g.features = random_tensor(nodes, d + 3, rng);
    g.adjacency = random_adjacency(nodes, rng);
    in.graph = std::move(g);
    return in;
}

// Random claims with a random score for every unordered pair.
struct DedupFixture {
    std::vector<veracity::corpus::ClaimRecord> claims;
    std::vector<std::tuple<std::string, std::string, double>> scores;
};

inline DedupFixture random_dedup_fixture(std::mt19937_64& rng, std::size_t max_claims = 12) {
    DedupFixture f;
    std::uniform_int_distribution<std::size_t> count(2, max_claims);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::size_t n = count(rng);
    for (std::size_t i = 0; i < n; ++i) {
        const std::string id = (i < 10 ? "c0" : "c") + std::to_string(i);
        f.claims.push_back({id, "claim " + std::to_string(i),
                            u(rng) < 0.5 ? veracity::corpus::Label::True : veracity::corpus::Label::False});
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (u(rng) < 0.4) f.scores.emplace_back(f.claims[i].id, f.claims[j].id, 0.8 + 0.2 * u(rng));
    return f;
}

inline std::filesystem::path temp_dir(const std::string& tag) {
    auto dir = std::filesystem::temp_directory_path() /
               ("veracity-test-" + tag + "-" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace oracle
