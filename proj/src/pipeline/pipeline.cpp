#include "veracity/pipeline/pipeline.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "veracity/corpus/lexicon.hpp"
#include "veracity/corpus/text.hpp"
#include "veracity/encoder/hashing_backend.hpp"
#include "veracity/encoder/http_backend.hpp"
#include "veracity/verdict/features.hpp"
#include "veracity/verdict/metrics.hpp"

namespace veracity::pipeline {

using nlohmann::json;

FileLock::FileLock(const std::filesystem::path& target) {
    const std::string path = target.string() + ".lock";
    fd_ = ::open(path.c_str(), O_CREAT | O_RDWR | O_CLOEXEC, 0644);
    if (fd_ < 0) throw Error("cannot open lock file " + path + ": " + std::strerror(errno));
    if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
        ::close(fd_);
        throw Error(target.string() + " is locked by another process");
    }
}

FileLock::~FileLock() {
    if (fd_ >= 0) {
        ::flock(fd_, LOCK_UN);
        ::close(fd_);
    }
}

std::filesystem::path index_file(const PipelineConfig& c) { return c.index_dir / "index.bin"; }
std::filesystem::path documents_file(const PipelineConfig& c) { return c.index_dir / "documents.jsonl"; }

Pipeline::Pipeline(PipelineConfig config) : config_(std::move(config)) { config_.validate(); }

encoder::EncoderClient& Pipeline::client() {
    if (client_) return *client_;
    std::shared_ptr<encoder::EncoderBackend> backend;
    if (config_.encoder == "hashing") {
        encoder::HashingOptions o;
        o.embed_dim = config_.embed_dim;
        o.encoder_dim = config_.encoder_dim;
        backend = std::make_shared<encoder::HashingBackend>(o);
    } else {
        backend = std::make_shared<encoder::HttpBackend>(config_.encoder);
    }
    std::shared_ptr<encoder::EncoderCache> cache;
    if (!config_.cache.empty()) {
        if (config_.mode == encoder::CacheMode::Record) cache_lock_ = std::make_unique<FileLock>(config_.cache);
        cache = std::make_shared<encoder::EncoderCache>(config_.cache);
    }
    // Replaying a sidecar recording must not contact the sidecar, so its model
    // identities fall back to the defaults.
    const bool offline = config_.mode == encoder::CacheMode::Replay && config_.encoder != "hashing";
    encoder::ModelIds models = offline ? encoder::ModelIds{} : backend->models();
    client_ = std::make_shared<encoder::EncoderClient>(backend, cache, config_.mode, models);
    return *client_;
}

const rerank::RelevanceScorer& Pipeline::scorer() {
    if (!scorer_) {
        const bool needs_client = config_.scorer.rfind("service:", 0) == 0;
        if (needs_client) client();
        scorer_ = rerank::make_scorer(config_.scorer, needs_client ? client_ : nullptr);
    }
    return *scorer_;
}

const index::InvertedIndex& Pipeline::index() {
    if (!index_) {
        if (config_.index_dir.empty()) throw UsageError("--index-dir is required");
        const auto path = index_file(config_);
        if (!std::filesystem::exists(path)) throw Error("no index at " + path.string() + "; run `veracity index` first");
        index_ = index::InvertedIndex::load(path);
    }
    return *index_;
}

const std::vector<corpus::DocumentRecord>& Pipeline::documents() {
    if (!documents_) {
        if (config_.index_dir.empty()) throw UsageError("--index-dir is required");
        documents_ = corpus::load_documents(documents_file(config_));
    }
    return *documents_;
}

std::vector<corpus::ClaimRecord> Pipeline::claims() const {
    if (config_.claims.empty()) throw UsageError("--claims is required");
    return corpus::load_claims(config_.claims, corpus::claim_format_for(config_.claims));
}

json Pipeline::stamp(json record) const {
    record["config_hash"] = config_.hash();
    record["seed"] = config_.seed;
    return record;
}

std::vector<index::ScoredDoc> Pipeline::search(const std::string& query) {
    rerank::MultistageParams params;
    params.first_k = config_.first_k;
    params.final_k = config_.final_k;
    params.bm25 = config_.bm25;
    if (config_.rm3) params.rm3 = config_.rm3_params;
    const auto& idx = index();
    return rerank::multistage_retrieve(idx, &scorer(), query, params);
}

std::vector<rerank::DocumentScore> Pipeline::rank_documents(const std::string& query) {
    return rerank::aggregate_documents(search(query));
}

evidence::EvidenceSet Pipeline::gather_evidence(const corpus::ClaimRecord& claim, std::size_t n) {
    std::map<std::string, const corpus::DocumentRecord*> by_id;
    for (const auto& d : documents()) by_id[d.id] = &d;
    std::vector<corpus::DocumentRecord> docs;
    for (const auto& ds : rank_documents(claim.text)) {
        if (docs.size() == config_.evidence_docs) break;
        auto it = by_id.find(ds.doc_id);
        if (it == by_id.end()) throw Error("index refers to unknown document '" + ds.doc_id + "'");
        docs.push_back(*it->second);
    }
    evidence::EvidenceOptions options;
    options.min_tokens = config_.min_sentence_tokens;
    options.analyzer = index().analyzer();
    const auto embed = evidence::client_embedder(client());
    if (config_.evidence_policy == evidence::SelectionPolicy::PerDocTopM) {
        auto set = evidence::retrieve_evidence_per_doc(claim, docs, config_.evidence_per_doc, embed, options);
        if (set.sentences.size() > n) set.sentences.resize(n);
        return set;
    }
    return evidence::retrieve_evidence_flat(claim, docs, n, embed, options);
}

verdict::ClaimInputs Pipeline::inputs_for(const corpus::ClaimRecord& claim, const evidence::EvidenceSet& ev,
                                          const verdict::HeadConfig& head) {
    std::vector<std::string> texts;
    for (const auto& s : ev.sentences) texts.push_back(s.text);
    return verdict::featurize(claim.id, claim.text, texts, client(), verdict::FeatureOptions::for_head(head));
}

void Pipeline::finish() {
    if (client_) client_->flush();
}

Records run_ingest(Pipeline& p, const std::filesystem::path& out) {
    auto claims = p.claims();
    std::size_t documents = 0;
    if (!p.config().docs.empty()) documents = corpus::load_documents(p.config().docs).size();

    corpus::EntityTagger tagger;
    if (p.config().encoder != "hashing") {
        tagger = [&p](std::string_view text) {
            std::vector<corpus::Entity> entities;
            for (const auto& e : p.client().ner(std::string(text))) entities.push_back({e.text, e.kind});
            return entities;
        };
    }
    const auto& lexicons = corpus::Lexicons::defaults();
    Records records;
    std::map<std::string, std::size_t> type_counts;
    std::size_t partial = 0;
    for (auto& c : claims) {
        const auto cat = corpus::categorize_claim(c, lexicons, tagger);
        c.types = cat.types;
        partial += cat.partial;
        json types = json::array();
        for (const auto& t : cat.types) {
            types.push_back(corpus::to_string(t));
            ++type_counts[corpus::to_string(t)];
        }
        records.push_back(p.stamp({{"record", "claim"}, {"id", c.id}, {"types", types}, {"partial", cat.partial}}));
    }
    if (!out.empty()) corpus::save_claims(out, claims, corpus::claim_format_for(out));
    const auto labels = dedup::count_labels(claims);
    records.push_back(p.stamp({{"record", "ingest"},
                               {"claims", claims.size()},
                               {"documents", documents},
                               {"labels", {{"False", labels.false_count}, {"True", labels.true_count}}},
                               {"types", type_counts},
                               {"partial_categorizations", partial}}));
    return records;
}

Records run_index(Pipeline& p) {
    const auto& c = p.config();
    if (c.docs.empty()) throw UsageError("--docs is required");
    if (c.index_dir.empty()) throw UsageError("--index-dir is required");
    const auto docs = corpus::load_documents(c.docs);
    std::filesystem::create_directories(c.index_dir);
    FileLock lock(index_file(c));

    std::vector<corpus::Paragraph> paragraphs;
    const auto counter = corpus::whitespace_counter();
    for (const auto& d : docs) {
        auto ps = corpus::segment_paragraphs(d, c.paragraph_tokens, counter);
        paragraphs.insert(paragraphs.end(), ps.begin(), ps.end());
    }
    const auto idx = index::InvertedIndex::build(paragraphs, index::AnalyzerConfig::english());
    idx.save(index_file(c));
    corpus::save_documents(documents_file(c), docs);
    return {p.stamp({{"record", "index"},
                     {"documents", docs.size()},
                     {"paragraphs", idx.doc_count()},
                     {"terms", idx.term_count()},
                     {"avg_doc_length", idx.avg_doc_length()},
                     {"path", index_file(c).string()}})};
}

Records run_search(Pipeline& p, const std::string& query) {
    if (index::Query::from_text(query, index::Analyzer(index::AnalyzerConfig::english())).empty()) {
        throw UsageError("search: query has no searchable terms");
    }
    Records records;
    std::size_t rank = 0;
    for (const auto& d : p.search(query)) {
        records.push_back(p.stamp({{"record", "hit"},
                                   {"rank", ++rank},
                                   {"paragraph_id", d.paragraph_id},
                                   {"doc_id", d.doc_id},
                                   {"score", d.score},
                                   {"stage", index::to_string(d.stage)}}));
    }
    return records;
}

Records run_dedup(Pipeline& p, const std::filesystem::path& kept_out) {
    const auto& c = p.config();
    const auto claims = p.claims();
    const auto claim_index = dedup::build_claim_index(claims, index::AnalyzerConfig::english());
    const auto scored = dedup::score_candidate_pairs(claims, claim_index, p.scorer(), c.dedup_candidates, c.bm25);

    auto counts_json = [](const dedup::LabelCounts& l) {
        return json{{"False", l.false_count}, {"True", l.true_count}, {"Total", l.total()}};
    };
    Records records;
    json summary = {{"record", "summary"},
                    {"preset", dedup::to_string(c.preset)},
                    {"policy", dedup::to_string(c.dedup_policy)},
                    {"scored_pairs", scored.size()},
                    {"original", counts_json(dedup::count_labels(claims))}};
    for (const auto preset : {dedup::Preset::Large, dedup::Preset::Small}) {
        const auto cfg = dedup::DedupConfig::for_preset(preset);
        const auto report = dedup::deduplicate(claims, dedup::filter_pairs(scored, cfg.threshold), c.dedup_policy);
        summary[std::string(dedup::to_string(preset))] = counts_json(report.after);
        if (preset != c.preset) continue;
        std::ostringstream lines;
        dedup::write_report_records(lines, report, dedup::to_string(preset));
        std::istringstream in(lines.str());
        for (std::string line; std::getline(in, line);) records.push_back(p.stamp(json::parse(line)));
        if (!kept_out.empty()) {
            std::vector<corpus::ClaimRecord> kept;
            std::set<std::string> ids(report.kept.begin(), report.kept.end());
            for (const auto& cl : claims) {
                if (ids.contains(cl.id)) kept.push_back(cl);
            }
            corpus::save_claims(kept_out, kept, corpus::claim_format_for(kept_out));
        }
    }
    records.push_back(p.stamp(summary));
    return records;
}

Records run_evidence(Pipeline& p, const std::optional<std::string>& claim_text, std::size_t n) {
    if (n == 0) throw UsageError("evidence: n must be >= 1");
    std::vector<corpus::ClaimRecord> claims;
    if (claim_text) {
        corpus::ClaimRecord c;
        c.id = "query";
        c.text = *claim_text;
        claims.push_back(std::move(c));
    } else {
        claims = p.claims();
    }
    Records records;
    for (const auto& c : claims) {
        json r = evidence::to_json(p.gather_evidence(c, n));
        r["record"] = "evidence";
        records.push_back(p.stamp(std::move(r)));
    }
    return records;
}

namespace {

std::vector<verdict::Example> build_dataset(Pipeline& p, const verdict::HeadConfig& head) {
    std::vector<verdict::Example> data;
    for (const auto& c : p.claims()) {
        const auto ev = p.gather_evidence(c, head.pairs);
        data.push_back({p.inputs_for(c, ev, head), c.label});
    }
    if (data.empty()) throw UsageError("no claims to train on");
    return data;
}

// Seeds for head initialization and training, both drawn from --seed.
std::pair<std::uint64_t, std::uint64_t> derived_seeds(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const auto init = rng();
    return {init, rng()};
}

}  // namespace

Records run_train(Pipeline& p) {
    const auto& c = p.config();
    if (c.checkpoint.empty()) throw UsageError("train: --checkpoint is required");
    const auto head_cfg = c.head_config();
    const auto train_cfg = c.train_config();
    const auto data = build_dataset(p, head_cfg);
    const auto [init_seed, train_seed] = derived_seeds(c.seed);

    auto head = verdict::make_head(head_cfg, init_seed);
    Records records;
    const auto result = verdict::train(*head, data, train_cfg, train_seed, [&](std::size_t epoch, double loss) {
        records.push_back(p.stamp({{"record", "epoch"}, {"epoch", epoch}, {"loss", loss}}));
    });
    head->save(c.checkpoint, {{"config_hash", c.hash()}, {"seed", c.seed}, {"train", train_cfg.to_json()}});
    records.push_back(p.stamp({{"record", "train"},
                               {"head", verdict::to_string(head_cfg.kind)},
                               {"examples", data.size()},
                               {"steps", result.steps},
                               {"final_loss", result.epoch_loss.back()},
                               {"checkpoint", c.checkpoint.string()}}));
    return records;
}

Records run_evaluate(Pipeline& p) {
    const auto& c = p.config();
    const auto head_cfg = c.head_config();
    const auto data = build_dataset(p, head_cfg);
    const auto [init_seed, train_seed] = derived_seeds(c.seed);
    const auto report = verdict::kfold_evaluate(
        data, c.folds, [&, init = init_seed](std::size_t fold) { return verdict::make_head(head_cfg, init + fold); },
        c.train_config(), train_seed);

    Records records;
    const json j = verdict::to_json(report);
    for (const auto& f : j["folds"]) {
        json r = f;
        r["record"] = "fold";
        r["head"] = report.head;
        records.push_back(p.stamp(std::move(r)));
    }
    records.push_back(p.stamp({{"record", "metrics"}, {"head", report.head}, {"folds", c.folds}, {"mean", j["mean"]}}));

    std::vector<std::optional<std::size_t>> ranks;
    for (const auto& cl : p.claims()) {
        if (!cl.relevant_doc_id) continue;
        std::optional<std::size_t> rank;
        const auto docs = p.rank_documents(cl.text);
        for (std::size_t i = 0; i < docs.size(); ++i) {
            if (docs[i].doc_id == *cl.relevant_doc_id) {
                rank = i + 1;
                break;
            }
        }
        ranks.push_back(rank);
    }
    if (!ranks.empty()) {
        records.push_back(p.stamp({{"record", "retrieval"},
                                   {"claims", ranks.size()},
                                   {"ap_at_1", verdict::ap_at_k(ranks, 1)},
                                   {"ap_at_5", verdict::ap_at_k(ranks, 5)},
                                   {"ap_at_10", verdict::ap_at_k(ranks, 10)}}));
    }
    return records;
}

json run_verify(Pipeline& p, const std::string& claim_text) {
    const auto& c = p.config();
    if (claim_text.find_first_not_of(" \t\r\n") == std::string::npos) throw UsageError("verify: empty claim");
    if (c.checkpoint.empty()) throw UsageError("verify: --checkpoint is required");
    if (!std::filesystem::exists(c.checkpoint)) throw Error("verify: no model checkpoint at " + c.checkpoint.string());
    auto [head, metadata] = verdict::load_head(c.checkpoint);

    corpus::ClaimRecord claim;
    claim.id = "query";
    claim.text = claim_text;
    const auto ev = p.gather_evidence(claim, head->config().pairs);
    const auto probs = head->predict_proba(p.inputs_for(claim, ev, head->config()));

    json evidence = json::array();
    for (const auto& s : ev.sentences) {
        evidence.push_back({{"text", s.text},
                            {"similarity", s.similarity},
                            {"source_doc_id", s.source_doc_id},
                            {"source_url", s.source_url}});
    }
    return p.stamp({{"record", "verdict"},
                    {"claim", claim_text},
                    {"verdict", probs[1] > probs[0] ? "True" : "False"},
                    {"probabilities", {{"False", probs[0]}, {"True", probs[1]}}},
                    {"head", verdict::to_string(head->kind())},
                    {"evidence", evidence}});
}

namespace {

std::string cell(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) {
        std::ostringstream s;
        s.setf(std::ios::fixed);
        s.precision(4);
        s << v.get<double>();
        return s.str();
    }
    return v.dump();
}

std::string metrics_row(const std::string& name, const json& m) {
    std::ostringstream s;
    s << name;
    for (const char* cls : {"False", "True"}) {
        for (const char* k : {"precision", "recall", "f1"}) s << " | " << cell(m[cls][k]);
    }
    s << " | " << cell(m["macro_f1"]);
    return s.str();
}

}  // namespace

std::string pretty(const Records& records) {
    std::ostringstream out;
    bool table_header = false;
    for (const auto& r : records) {
        const std::string kind = r.value("record", "");
        if (kind == "fold" || kind == "metrics") {
            if (!table_header) {
                out << "model | False P | False R | False F1 | True P | True R | True F1 | Macro F1\n";
                table_header = true;
            }
            if (kind == "fold") {
                out << metrics_row(r["head"].get<std::string>() + " fold " + cell(r["fold"]), r["metrics"]) << '\n';
            } else {
                out << metrics_row(r["head"].get<std::string>() + " mean", r["mean"]) << '\n';
            }
            continue;
        }
        out << (kind.empty() ? "record" : kind) << ':';
        for (const auto& [k, v] : r.items()) {
            if (k == "record" || k == "config_hash" || k == "seed") continue;
            if (v.is_array() && !v.empty() && v.front().is_object()) {
                out << "\n  " << k << ':';
                for (const auto& item : v) {
                    out << "\n   -";
                    for (const auto& [ik, iv] : item.items()) out << ' ' << ik << '=' << cell(iv);
                }
                continue;
            }
            out << ' ' << k << '=' << cell(v);
        }
        out << '\n';
    }
    if (!records.empty()) {
        out << "(config " << records.front().value("config_hash", "") << ", seed "
            << records.front().value("seed", std::uint64_t{0}) << ")\n";
    }
    return out.str();
}

}  // namespace veracity::pipeline
