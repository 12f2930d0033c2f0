#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "veracity/corpus/records.hpp"
#include "veracity/index/analyzer.hpp"

namespace veracity::index {

using DocSlot = std::uint32_t;
using TermId = std::uint32_t;

struct Posting {
    DocSlot doc = 0;
    std::uint32_t tf = 0;

    bool operator==(const Posting&) const = default;
};

struct TermFrequency {
    TermId term = 0;
    std::uint32_t tf = 0;
};

// Immutable after build. Paragraphs are assigned slots in ascending
// paragraph-id order, so slot order and paragraph-id order coincide and
// postings sorted by slot are sorted by paragraph id.
class InvertedIndex {
public:
    static constexpr std::uint32_t kFormatVersion = 1;

    InvertedIndex() : analyzer_(AnalyzerConfig{}) {}

    static InvertedIndex build(const std::vector<corpus::Paragraph>& paragraphs,
                               AnalyzerConfig config = AnalyzerConfig::english());

    std::size_t doc_count() const { return doc_lengths_.size(); }
    std::size_t term_count() const { return terms_.size(); }
    double avg_doc_length() const { return avg_doc_length_; }
    const Analyzer& analyzer() const { return analyzer_; }

    std::optional<TermId> term_id(std::string_view term) const;
    const std::string& term(TermId id) const { return terms_[id]; }
    // Empty for unknown terms.
    const std::vector<Posting>& postings(std::string_view term) const;
    const std::vector<Posting>& postings(TermId id) const { return postings_[id]; }
    std::size_t document_frequency(std::string_view term) const { return postings(term).size(); }

    std::uint32_t doc_length(DocSlot d) const { return doc_lengths_[d]; }
    const std::string& paragraph_id(DocSlot d) const { return paragraph_ids_[d]; }
    const std::string& doc_id(DocSlot d) const { return doc_ids_[d]; }
    const std::string& text(DocSlot d) const { return texts_[d]; }
    std::optional<DocSlot> slot_of(std::string_view paragraph_id) const;

    // Forward index: the document's distinct terms, ascending term id.
    const std::vector<TermFrequency>& doc_terms(DocSlot d) const { return forward_[d]; }

    // Layout, all integers little-endian:
    //   magic "VRCYIDX\0", u32 version, u32 analyzer id, u64 doc_count, f64 avg_doc_length,
    //   u32 stopword count + strings,
    //   doc table: per doc u32 length, string paragraph id, string doc id,
    //   term dictionary: u64 term count, per term string, u64 postings offset, u32 postings length,
    //   postings: u64 count, per posting u32 slot, u32 tf,
    //   texts: per doc string.
    // Strings are u32 length + bytes.
    void save(const std::filesystem::path& path) const;
    static InvertedIndex load(const std::filesystem::path& path);

private:
    void rebuild_derived();

    Analyzer analyzer_;
    std::vector<std::string> paragraph_ids_;
    std::vector<std::string> doc_ids_;
    std::vector<std::string> texts_;
    std::vector<std::uint32_t> doc_lengths_;
    double avg_doc_length_ = 0.0;
    std::vector<std::string> terms_;  // ascending
    std::map<std::string, TermId, std::less<>> term_ids_;
    std::vector<std::vector<Posting>> postings_;
    std::vector<std::vector<TermFrequency>> forward_;
    std::map<std::string, DocSlot, std::less<>> slots_;
};

}  // namespace veracity::index
