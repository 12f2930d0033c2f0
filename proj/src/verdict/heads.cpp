#include "veracity/verdict/heads.hpp"

#include <random>

#include "veracity/error.hpp"
#include "veracity/nn/checkpoint.hpp"
#include "veracity/nn/init.hpp"
#include "veracity/nn/ops.hpp"

namespace veracity::verdict {

namespace {

constexpr std::array<double, 3> kNeutral{0.0, 1.0, 0.0};

nn::Tensor triplet_row(const std::array<double, 3>& t) { return nn::Tensor::row_vector({t[0], t[1], t[2]}); }

void require_inputs(bool ok, HeadKind kind, const std::string& what) {
    if (!ok) throw InvalidArgument(std::string(to_string(kind)) + ": " + what);
}

class SanHead final : public Head {
public:
    explicit SanHead(HeadConfig c) : Head(c) {
        const std::size_t d = c.encoder_dim;
        wq_ = &add_parameter("san.w_q", 3, d, false);
        wk_ = &add_parameter("san.w_k", d, d, false);
        wv_ = &add_parameter("san.w_v", d, d, false);
        add_classifier(c.pairs * d);
    }

    nn::Var forward(nn::Tape& t, const ClaimInputs& in) const override {
        const HeadConfig& c = config();
        require_inputs(in.pairs.size() <= c.pairs, kind(),
                       std::to_string(in.pairs.size()) + " pairs exceed N=" + std::to_string(c.pairs));
        const nn::Var wq = t.parameter(*wq_);
        const nn::Var wk = t.parameter(*wk_);
        const nn::Var wv = t.parameter(*wv_);
        static const std::vector<bool> kPaddingMask{false};
        std::vector<nn::Var> outputs;
        for (std::size_t i = 0; i < c.pairs; ++i) {
            nn::Var s{};
            nn::Var q{};
            const std::vector<bool>* mask = nullptr;
            if (i < in.pairs.size()) {
                const PairInput& p = in.pairs[i];
                require_inputs(p.tokens.rows() > 0 && p.tokens.cols() == c.encoder_dim, kind(),
                               "pair " + std::to_string(i) + " needs token vectors of width " +
                                   std::to_string(c.encoder_dim));
                s = t.constant(p.tokens);
                q = t.constant(triplet_row(p.nli));
                if (!p.token_mask.empty()) mask = &p.token_mask;
            } else {
                s = t.constant(nn::Tensor(1, c.encoder_dim));
                q = t.constant(triplet_row(kNeutral));
                mask = &kPaddingMask;
            }
            const nn::Var keys = nn::matmul(t, s, wk);
            const nn::Var values = nn::matmul(t, s, wv);
            const nn::Var query = nn::matmul(t, q, wq);
            outputs.push_back(nn::scaled_dot_attention(t, query, keys, values, mask));
        }
        return classify(t, nn::concat_cols(t, outputs));
    }

private:
    const nn::Parameter* wq_;
    const nn::Parameter* wk_;
    const nn::Parameter* wv_;
};

class GraphHead final : public Head {
public:
    explicit GraphHead(HeadConfig c) : Head(c) {
        in_dim_ = c.kind == HeadKind::NliGraphAbl ? 3 : c.encoder_dim + 3;
        w_ = &add_parameter("gcn.w", in_dim_, c.gcn_channels, false);
        b_ = &add_parameter("gcn.b", 1, c.gcn_channels, true);
        add_classifier(c.gcn_channels);
    }

    nn::Var forward(nn::Tape& t, const ClaimInputs& in) const override {
        require_inputs(in.graph.has_value(), kind(), "missing evidence graph");
        const EvidenceGraph& g = *in.graph;
        require_inputs(g.nodes() > 0, kind(), "empty graph");
        const std::size_t width = config().encoder_dim + 3;
        require_inputs(g.features.cols() == width, kind(),
                       "node features of width " + std::to_string(g.features.cols()) + ", expected " +
                           std::to_string(width));
        nn::Var x = t.constant(g.features);
        if (kind() == HeadKind::NliGraphAbl) x = nn::slice_cols(t, x, width - 3, width);
        nn::Var h = nn::add_row(t, nn::gcn_layer(t, x, g.adjacency, t.parameter(*w_)), t.parameter(*b_));
        if (config().gcn_relu) h = nn::relu(t, h);
        return classify(t, nn::mean_rows(t, h));
    }

private:
    std::size_t in_dim_;
    const nn::Parameter* w_;
    const nn::Parameter* b_;
};

class NliHead final : public Head {
public:
    explicit NliHead(HeadConfig c) : Head(c) { add_classifier(3 * c.pairs); }

    nn::Var forward(nn::Tape& t, const ClaimInputs& in) const override {
        const std::size_t n = config().pairs;
        require_inputs(in.pairs.size() <= n, kind(), "too many pairs");
        nn::Tensor x(1, 3 * n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto& tri = i < in.pairs.size() ? in.pairs[i].nli : kNeutral;
            for (std::size_t j = 0; j < 3; ++j) x(0, 3 * i + j) = tri[j];
        }
        return classify(t, t.constant(std::move(x)));
    }
};

class SentHead final : public Head {
public:
    explicit SentHead(HeadConfig c) : Head(c) { add_classifier(c.pairs * (c.encoder_dim + 3)); }

    nn::Var forward(nn::Tape& t, const ClaimInputs& in) const override {
        const std::size_t n = config().pairs;
        const std::size_t d = config().encoder_dim;
        require_inputs(in.pairs.size() <= n, kind(), "too many pairs");
        nn::Tensor x(1, n * (d + 3));
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t off = i * (d + 3);
            if (i < in.pairs.size()) {
                const PairInput& p = in.pairs[i];
                require_inputs(p.tokens.rows() > 0 && p.tokens.cols() == d, kind(),
                               "pair " + std::to_string(i) + " needs its first token vector");
                for (std::size_t j = 0; j < d; ++j) x(0, off + j) = p.tokens(0, j);
                for (std::size_t j = 0; j < 3; ++j) x(0, off + d + j) = p.nli[j];
            } else {
                x(0, off + d + 1) = 1.0;
            }
        }
        return classify(t, t.constant(std::move(x)));
    }
};

class PSentHead final : public Head {
public:
    explicit PSentHead(HeadConfig c) : Head(c) { add_classifier(c.encoder_dim + 3); }

    nn::Var forward(nn::Tape& t, const ClaimInputs& in) const override {
        const std::size_t d = config().encoder_dim;
        const std::size_t n = std::min(in.pairs.size(), config().pairs);
        nn::Tensor rows(std::max<std::size_t>(n, 1), d + 3);
        if (n == 0) rows(0, d + 1) = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const PairInput& p = in.pairs[i];
            require_inputs(p.pooled.size() == d, kind(), "pair " + std::to_string(i) + " needs a pooled vector");
            for (std::size_t j = 0; j < d; ++j) rows(i, j) = p.pooled[j];
            for (std::size_t j = 0; j < 3; ++j) rows(i, d + j) = p.nli[j];
        }
        return classify(t, nn::mean_rows(t, t.constant(std::move(rows))));
    }
};

}  // namespace

std::string_view to_string(HeadKind kind) {
    switch (kind) {
        case HeadKind::NliSan: return "nli-san";
        case HeadKind::NliGraph: return "nli-graph";
        case HeadKind::Nli: return "nli";
        case HeadKind::NliSent: return "nli-sent";
        case HeadKind::NliPSent: return "nli-psent";
        case HeadKind::NliGraphAbl: return "nli-graph-abl";
    }
    return "nli-san";
}

HeadKind parse_head_kind(std::string_view text) {
    for (HeadKind k : {HeadKind::NliSan, HeadKind::NliGraph, HeadKind::Nli, HeadKind::NliSent, HeadKind::NliPSent,
                       HeadKind::NliGraphAbl}) {
        if (to_string(k) == text) return k;
    }
    throw InvalidArgument("unknown head '" + std::string(text) + "'");
}

bool is_graph_head(HeadKind kind) { return kind == HeadKind::NliGraph || kind == HeadKind::NliGraphAbl; }

HeadConfig HeadConfig::defaults(HeadKind kind, std::size_t encoder_dim) {
    HeadConfig c;
    c.kind = kind;
    c.encoder_dim = encoder_dim;
    c.pairs = (is_graph_head(kind) || kind == HeadKind::NliPSent) ? 30 : 5;
    return c;
}

void HeadConfig::validate() const {
    if (encoder_dim == 0 || pairs == 0 || hidden == 0 || gcn_channels == 0) {
        throw InvalidArgument("head config: dimensions must be positive");
    }
    if (!(graph_threshold >= -1.0)) throw InvalidArgument("head config: bad graph threshold");
}

nlohmann::json HeadConfig::to_json() const {
    return {{"kind", std::string(to_string(kind))},
            {"encoder_dim", encoder_dim},
            {"pairs", pairs},
            {"hidden", hidden},
            {"gcn_channels", gcn_channels},
            {"gcn_relu", gcn_relu},
            {"graph_threshold", graph_threshold}};
}

HeadConfig HeadConfig::from_json(const nlohmann::json& j) {
    try {
        HeadConfig c = defaults(parse_head_kind(j.at("kind").get<std::string>()), j.at("encoder_dim").get<std::size_t>());
        c.pairs = j.value("pairs", c.pairs);
        c.hidden = j.value("hidden", c.hidden);
        c.gcn_channels = j.value("gcn_channels", c.gcn_channels);
        c.gcn_relu = j.value("gcn_relu", c.gcn_relu);
        c.graph_threshold = j.value("graph_threshold", c.graph_threshold);
        c.validate();
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("head config: ") + e.what());
    }
}

Head::Head(HeadConfig config) : config_(config) { config_.validate(); }

nn::Parameter& Head::add_parameter(std::string name, std::size_t rows, std::size_t cols, bool bias) {
    params_.emplace_back(std::move(name), rows, cols);
    is_bias_.push_back(bias);
    return params_.back();
}

void Head::add_classifier(std::size_t input_dim) {
    w1_ = &add_parameter("mlp.w1", input_dim, config_.hidden, false);
    b1_ = &add_parameter("mlp.b1", 1, config_.hidden, true);
    w2_ = &add_parameter("mlp.w2", config_.hidden, 2, false);
    b2_ = &add_parameter("mlp.b2", 1, 2, true);
}

nn::Var Head::classify(nn::Tape& t, nn::Var features) const {
    nn::Var h = nn::relu(t, nn::linear(t, features, t.parameter(*w1_), t.parameter(*b1_)));
    return nn::softmax(t, nn::linear(t, h, t.parameter(*w2_), t.parameter(*b2_)), 1);
}

std::array<double, 2> Head::predict_proba(const ClaimInputs& in) const {
    nn::Tape t;
    const nn::Tensor& p = t.value(forward(t, in));
    return {p(0, 0), p(0, 1)};
}

corpus::Label Head::predict(const ClaimInputs& in) const {
    auto p = predict_proba(in);
    return p[1] > p[0] ? corpus::Label::True : corpus::Label::False;
}

std::vector<nn::Parameter*> Head::parameters() {
    std::vector<nn::Parameter*> out;
    for (auto& p : params_) out.push_back(&p);
    return out;
}

std::vector<const nn::Parameter*> Head::parameters() const {
    std::vector<const nn::Parameter*> out;
    for (const auto& p : params_) out.push_back(&p);
    return out;
}

void Head::initialize(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < params_.size(); ++i) {
        if (is_bias_[i]) {
            params_[i].value.fill(0.0);
        } else {
            nn::glorot_uniform(params_[i].value, rng);
        }
        params_[i].zero_grad();
    }
}

void Head::save(const std::filesystem::path& path, nlohmann::json metadata) const {
    metadata["head"] = config_.to_json();
    nn::save_checkpoint(path, parameters(), metadata);
}

std::unique_ptr<Head> make_head(const HeadConfig& config, std::uint64_t seed) {
    std::unique_ptr<Head> head;
    switch (config.kind) {
        case HeadKind::NliSan: head = std::make_unique<SanHead>(config); break;
        case HeadKind::NliGraph:
        case HeadKind::NliGraphAbl: head = std::make_unique<GraphHead>(config); break;
        case HeadKind::Nli: head = std::make_unique<NliHead>(config); break;
        case HeadKind::NliSent: head = std::make_unique<SentHead>(config); break;
        case HeadKind::NliPSent: head = std::make_unique<PSentHead>(config); break;
    }
    head->initialize(seed);
    return head;
}

std::pair<std::unique_ptr<Head>, nlohmann::json> load_head(const std::filesystem::path& path) {
    nn::Checkpoint ckpt = nn::load_checkpoint(path);
    if (!ckpt.metadata.contains("head")) throw ParseError(path.string() + ": checkpoint has no head config");
    auto head = make_head(HeadConfig::from_json(ckpt.metadata["head"]), 0);
    nn::restore_parameters(ckpt, head->parameters());
    return {std::move(head), std::move(ckpt.metadata)};
}

}  // namespace veracity::verdict
