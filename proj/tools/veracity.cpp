#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "veracity/error.hpp"
#include "veracity/pipeline/pipeline.hpp"

using namespace veracity;
using pipeline::PipelineConfig;

namespace {

struct Overrides {
    std::optional<std::string> claims, docs, index_dir, cache, checkpoint, mode, preset, head, scorer, encoder,
        evidence_policy, dedup_policy;
    std::optional<std::uint64_t> seed;
    std::optional<double> k1, b, lr;
    std::optional<std::size_t> first_k, final_k, epochs, folds, encoder_dim, embed_dim, batch_size;
    bool rm3 = false;

    void apply(PipelineConfig& c) const {
        if (claims) c.claims = *claims;
        if (docs) c.docs = *docs;
        if (index_dir) c.index_dir = *index_dir;
        if (cache) c.cache = *cache;
        if (checkpoint) c.checkpoint = *checkpoint;
        if (mode) c.mode = encoder::parse_cache_mode(*mode);
        if (preset) c.preset = dedup::parse_preset(*preset);
        if (head) c.head = verdict::parse_head_kind(*head);
        if (scorer) c.scorer = *scorer;
        if (encoder) c.encoder = *encoder;
        if (evidence_policy) c.evidence_policy = evidence::parse_selection_policy(*evidence_policy);
        if (dedup_policy) c.dedup_policy = dedup::parse_policy(*dedup_policy);
        if (seed) c.seed = *seed;
        if (k1) c.bm25.k1 = *k1;
        if (b) c.bm25.b = *b;
        if (lr) c.learning_rate = *lr;
        if (first_k) c.first_k = *first_k;
        if (final_k) c.final_k = *final_k;
        if (epochs) c.epochs = *epochs;
        if (folds) c.folds = *folds;
        if (encoder_dim) c.encoder_dim = *encoder_dim;
        if (embed_dim) c.embed_dim = *embed_dim;
        if (batch_size) c.batch_size = *batch_size;
        if (rm3) c.rm3 = true;
    }
};

void emit(const pipeline::Records& records, bool pretty, const std::string& output) {
    std::ofstream file;
    if (!output.empty()) {
        file.open(output, std::ios::trunc);
        if (!file) throw Error("cannot write " + output);
    }
    std::ostream& out = output.empty() ? std::cout : file;
    if (pretty) {
        out << pipeline::pretty(records);
    } else {
        for (const auto& r : records) out << r.dump() << '\n';
    }
    out.flush();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Claim verification pipeline: retrieval, de-duplication, evidence selection, veracity heads"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, output;
    bool pretty = false;
    Overrides o;
    app.add_option("--config", config_path, "JSON configuration file; flags override it")->check(CLI::ExistingFile);
    app.add_option("--seed", o.seed, "Seed for every randomized step");
    app.add_option("--claims", o.claims, "Claims file (.jsonl or .csv)");
    app.add_option("--docs", o.docs, "Documents file (.jsonl)");
    app.add_option("--index-dir", o.index_dir, "Directory holding the paragraph index");
    app.add_option("--cache", o.cache, "Encoder response cache file");
    app.add_option("--mode", o.mode, "Encoder cache mode")->check(CLI::IsMember({"live", "record", "replay"}));
    app.add_option("--preset", o.preset, "De-duplication preset")->check(CLI::IsMember({"large", "small"}));
    app.add_option("--head", o.head, "Veracity head")
        ->check(CLI::IsMember({"nli-san", "nli-graph", "nli", "nli-sent", "nli-psent", "nli-graph-abl"}));
    app.add_option("--k1", o.k1, "BM25 k1");
    app.add_option("--b", o.b, "BM25 b");
    app.add_option("--first-k", o.first_k, "First-stage candidates");
    app.add_option("--final-k", o.final_k, "Results kept after re-ranking");
    app.add_flag("--rm3", o.rm3, "Expand queries with RM3 before the first stage");
    app.add_option("--scorer", o.scorer, "Re-ranker: overlap | fixture:<path> | service:<url>");
    app.add_option("--encoder", o.encoder, "Encoder: hashing | http://host:port");
    app.add_option("--encoder-dim", o.encoder_dim, "Pair-encoder width (hashing encoder)");
    app.add_option("--embed-dim", o.embed_dim, "Sentence-embedding width (hashing encoder)");
    app.add_option("--checkpoint", o.checkpoint, "Trained head checkpoint");
    app.add_option("--epochs", o.epochs, "Override training epochs");
    app.add_option("--lr", o.lr, "Override base learning rate");
    app.add_option("--batch-size", o.batch_size, "Training batch size");
    app.add_option("--folds", o.folds, "Cross-validation folds");
    app.add_option("--evidence-policy", o.evidence_policy, "Evidence selection")
        ->check(CLI::IsMember({"flat_top_n", "per_doc_top_m"}));
    app.add_option("--dedup-policy", o.dedup_policy, "Removal rule")
        ->check(CLI::IsMember({"earlier_match", "greedy_first_kept"}));
    app.add_option("--output", output, "Write records here instead of stdout");
    app.add_flag("--pretty", pretty, "Human-readable tables instead of line records");

    std::string claims_out, kept_out, query, claim;
    std::optional<std::string> evidence_claim;
    std::size_t evidence_n = 5;

    auto* ingest = app.add_subcommand("ingest", "Validate and categorize claims");
    ingest->add_option("--claims-out", claims_out, "Write categorized claims here");
    auto* index_cmd = app.add_subcommand("index", "Segment documents and build the BM25 index");
    auto* search = app.add_subcommand("search", "Multistage retrieval for one query");
    search->add_option("query", query, "Query text")->required();
    auto* dedup_cmd = app.add_subcommand("dedup", "Remove near-duplicate claims");
    dedup_cmd->add_option("--kept-out", kept_out, "Write the kept claims here");
    auto* evidence_cmd = app.add_subcommand("evidence", "Select evidence sentences for claims");
    evidence_cmd->add_option("--claim", evidence_claim, "A single claim text instead of --claims");
    evidence_cmd->add_option("--n", evidence_n, "Sentences per claim");
    auto* train_cmd = app.add_subcommand("train", "Train a veracity head on labelled claims");
    auto* evaluate_cmd = app.add_subcommand("evaluate", "Cross-validated metrics and retrieval AP@k");
    auto* verify_cmd = app.add_subcommand("verify", "Retrieve evidence and predict a verdict for one claim");
    verify_cmd->add_option("--claim", claim, "Claim text")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        PipelineConfig config = config_path.empty() ? PipelineConfig{} : PipelineConfig::load(config_path);
        try {
            o.apply(config);
        } catch (const InvalidArgument& e) {
            throw pipeline::UsageError(e.what());
        }
        pipeline::Pipeline p(config);

        pipeline::Records records;
        if (*ingest) {
            records = pipeline::run_ingest(p, claims_out);
        } else if (*index_cmd) {
            records = pipeline::run_index(p);
        } else if (*search) {
            records = pipeline::run_search(p, query);
        } else if (*dedup_cmd) {
            records = pipeline::run_dedup(p, kept_out);
        } else if (*evidence_cmd) {
            records = pipeline::run_evidence(p, evidence_claim, evidence_n);
        } else if (*train_cmd) {
            records = pipeline::run_train(p);
        } else if (*evaluate_cmd) {
            records = pipeline::run_evaluate(p);
        } else if (*verify_cmd) {
            records = {pipeline::run_verify(p, claim)};
        }
        p.finish();
        emit(records, pretty, output);
        return 0;
    } catch (const pipeline::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n" << app.help();
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
