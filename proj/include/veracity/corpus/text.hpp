#pragma once

#include <cstddef>
#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "veracity/corpus/lexicon.hpp"
#include "veracity/corpus/records.hpp"

namespace veracity::corpus {

// Number of model tokens in a single whitespace-delimited word.
using TokenCounter = std::function<std::size_t(std::string_view word)>;

// Counts every word as one token.
TokenCounter whitespace_counter();

// Whitespace token stream of a text.
std::vector<std::string> whitespace_tokens(std::string_view text);

// Greedy left-to-right packing of the document's words into paragraphs of at
// most `max_tokens` tokens. Paragraph text is its words joined by single spaces.
std::vector<Paragraph> segment_paragraphs(const DocumentRecord& doc, std::size_t max_tokens,
                                          const TokenCounter& counter = whitespace_counter());

// Splits on '.', '!' and '?' followed by whitespace (or end of text) and on
// blank lines. A '.'-terminated word found in `abbreviations` does not end a
// sentence. Returned sentences are trimmed; no non-whitespace character is
// added or dropped.
std::vector<std::string> split_sentences(std::string_view text, const std::set<std::string>& abbreviations);
std::vector<std::string> split_sentences(std::string_view text);

struct Entity {
    std::string text;
    std::string kind;  // tagger label, e.g. PERSON, ORG, GPE, FAC, DATE
};

using EntityTagger = std::function<std::vector<Entity>(std::string_view text)>;

struct Categorization {
    std::set<ClaimType> types;
    bool partial = false;  // entity tagger failed; NamedEntity tags missing
};

Categorization categorize_claim(const ClaimRecord& claim, const Lexicons& lexicons,
                                const EntityTagger& tagger = nullptr);

}  // namespace veracity::corpus
