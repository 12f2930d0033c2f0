#include "veracity/index/inverted_index.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include "veracity/binary_io.hpp"

namespace veracity::index {

namespace {
constexpr char kMagic[8] = {'V', 'R', 'C', 'Y', 'I', 'D', 'X', '\0'};
const std::vector<Posting> kNoPostings;
}  // namespace

InvertedIndex InvertedIndex::build(const std::vector<corpus::Paragraph>& paragraphs, AnalyzerConfig config) {
    InvertedIndex idx;
    idx.analyzer_ = Analyzer(std::move(config));

    std::vector<std::size_t> order(paragraphs.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<std::string> ids(paragraphs.size());
    for (std::size_t i = 0; i < paragraphs.size(); ++i) ids[i] = paragraphs[i].id();
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ids[a] < ids[b]; });
    for (std::size_t i = 1; i < order.size(); ++i) {
        if (ids[order[i]] == ids[order[i - 1]]) throw InvalidArgument("build_index: duplicate paragraph id " + ids[order[i]]);
    }

    std::map<std::string, std::vector<Posting>> postings;
    for (std::size_t slot = 0; slot < order.size(); ++slot) {
        const auto& p = paragraphs[order[slot]];
        auto tokens = idx.analyzer_.analyze(p.text);
        std::map<std::string, std::uint32_t> counts;
        for (auto& t : tokens) ++counts[std::move(t)];
        for (auto& [term, tf] : counts) postings[term].push_back({static_cast<DocSlot>(slot), tf});
        idx.paragraph_ids_.push_back(ids[order[slot]]);
        idx.doc_ids_.push_back(p.doc_id);
        idx.texts_.push_back(p.text);
        idx.doc_lengths_.push_back(static_cast<std::uint32_t>(tokens.size()));
    }
    for (auto& [term, list] : postings) {
        idx.terms_.push_back(term);
        idx.postings_.push_back(std::move(list));
    }
    idx.rebuild_derived();
    return idx;
}

void InvertedIndex::rebuild_derived() {
    term_ids_.clear();
    for (TermId t = 0; t < terms_.size(); ++t) term_ids_.emplace(terms_[t], t);
    slots_.clear();
    for (DocSlot d = 0; d < paragraph_ids_.size(); ++d) slots_.emplace(paragraph_ids_[d], d);
    forward_.assign(doc_lengths_.size(), {});
    for (TermId t = 0; t < postings_.size(); ++t) {
        for (const auto& p : postings_[t]) forward_[p.doc].push_back({t, p.tf});
    }
    const double total = std::accumulate(doc_lengths_.begin(), doc_lengths_.end(), 0.0);
    avg_doc_length_ = doc_lengths_.empty() ? 0.0 : total / static_cast<double>(doc_lengths_.size());
}

std::optional<TermId> InvertedIndex::term_id(std::string_view term) const {
    auto it = term_ids_.find(term);
    if (it == term_ids_.end()) return std::nullopt;
    return it->second;
}

const std::vector<Posting>& InvertedIndex::postings(std::string_view term) const {
    auto id = term_id(term);
    return id ? postings_[*id] : kNoPostings;
}

std::optional<DocSlot> InvertedIndex::slot_of(std::string_view paragraph_id) const {
    auto it = slots_.find(paragraph_id);
    if (it == slots_.end()) return std::nullopt;
    return it->second;
}

void InvertedIndex::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write index " + path.string());
    out.write(kMagic, sizeof kMagic);
    binary::write<std::uint32_t>(out, kFormatVersion);
    binary::write<std::uint32_t>(out, analyzer_.config().id());
    binary::write<std::uint64_t>(out, doc_count());
    binary::write<double>(out, avg_doc_length_);
    binary::write<std::uint32_t>(out, static_cast<std::uint32_t>(analyzer_.config().stopwords.size()));
    for (const auto& s : analyzer_.config().stopwords) binary::write_string(out, s);
    for (DocSlot d = 0; d < doc_count(); ++d) {
        binary::write<std::uint32_t>(out, doc_lengths_[d]);
        binary::write_string(out, paragraph_ids_[d]);
        binary::write_string(out, doc_ids_[d]);
    }
    binary::write<std::uint64_t>(out, terms_.size());
    std::uint64_t offset = 0;
    for (TermId t = 0; t < terms_.size(); ++t) {
        binary::write_string(out, terms_[t]);
        binary::write<std::uint64_t>(out, offset);
        binary::write<std::uint32_t>(out, static_cast<std::uint32_t>(postings_[t].size()));
        offset += postings_[t].size();
    }
    binary::write<std::uint64_t>(out, offset);
    for (const auto& list : postings_) {
        for (const auto& p : list) {
            binary::write<std::uint32_t>(out, p.doc);
            binary::write<std::uint32_t>(out, p.tf);
        }
    }
    for (const auto& text : texts_) binary::write_string(out, text);
    if (!out) throw Error("failed writing index " + path.string());
}

InvertedIndex InvertedIndex::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open index " + path.string());
    char magic[8] = {};
    if (!in.read(magic, sizeof magic) || !std::equal(magic, magic + 8, kMagic)) {
        throw ParseError("index: bad magic in " + path.string());
    }
    auto version = binary::read<std::uint32_t>(in);
    if (version != kFormatVersion) {
        throw ParseError("index: unsupported format version " + std::to_string(version));
    }
    auto analyzer_id = binary::read<std::uint32_t>(in);
    if ((analyzer_id & 0xFF) != Analyzer::kTokenizerRule) {
        throw ParseError("index: unknown tokenizer rule " + std::to_string(analyzer_id & 0xFF));
    }
    InvertedIndex idx;
    AnalyzerConfig config;
    config.lowercase = (analyzer_id & (1u << 8)) != 0;
    config.stem = (analyzer_id & (1u << 9)) != 0;
    auto docs = binary::read<std::uint64_t>(in);
    auto stored_avg = binary::read<double>(in);
    auto stop_count = binary::read<std::uint32_t>(in);
    for (std::uint32_t i = 0; i < stop_count; ++i) config.stopwords.insert(binary::read_string(in));
    idx.analyzer_ = Analyzer(std::move(config));
    for (std::uint64_t d = 0; d < docs; ++d) {
        idx.doc_lengths_.push_back(binary::read<std::uint32_t>(in));
        idx.paragraph_ids_.push_back(binary::read_string(in));
        idx.doc_ids_.push_back(binary::read_string(in));
    }
    auto term_count = binary::read<std::uint64_t>(in);
    std::vector<std::pair<std::uint64_t, std::uint32_t>> spans;
    for (std::uint64_t t = 0; t < term_count; ++t) {
        idx.terms_.push_back(binary::read_string(in));
        auto offset = binary::read<std::uint64_t>(in);
        auto length = binary::read<std::uint32_t>(in);
        spans.emplace_back(offset, length);
    }
    auto total = binary::read<std::uint64_t>(in);
    std::vector<Posting> flat(total);
    for (auto& p : flat) {
        p.doc = binary::read<std::uint32_t>(in);
        p.tf = binary::read<std::uint32_t>(in);
        if (p.doc >= docs) throw ParseError("index: posting references unknown paragraph");
    }
    for (auto [offset, length] : spans) {
        if (offset + length > total) throw ParseError("index: postings offset out of range");
        idx.postings_.emplace_back(flat.begin() + static_cast<std::ptrdiff_t>(offset),
                                   flat.begin() + static_cast<std::ptrdiff_t>(offset + length));
    }
    for (std::uint64_t d = 0; d < docs; ++d) idx.texts_.push_back(binary::read_string(in));
    idx.rebuild_derived();
    if (idx.avg_doc_length_ != stored_avg) throw ParseError("index: avg_doc_length does not match doc-length table");
    return idx;
}

}  // namespace veracity::index
