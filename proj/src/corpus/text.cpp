#include "veracity/corpus/text.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

namespace veracity::corpus {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

// Strips surrounding punctuation but keeps inner characters ("COVID-19" stays whole).
std::string_view strip_punct(std::string_view word) {
    const auto punct = [](char c) {
        return std::ispunct(static_cast<unsigned char>(c)) != 0 && c != '$' && c != '%';
    };
    while (!word.empty() && punct(word.front())) word.remove_prefix(1);
    while (!word.empty() && punct(word.back())) word.remove_suffix(1);
    return word;
}

bool is_closer(char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; }

}  // namespace

TokenCounter whitespace_counter() {
    return [](std::string_view) -> std::size_t { return 1; };
}

std::vector<std::string> whitespace_tokens(std::string_view text) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && is_space(text[i])) ++i;
        std::size_t start = i;
        while (i < text.size() && !is_space(text[i])) ++i;
        if (i > start) tokens.emplace_back(text.substr(start, i - start));
    }
    return tokens;
}

std::vector<Paragraph> segment_paragraphs(const DocumentRecord& doc, std::size_t max_tokens,
                                          const TokenCounter& counter) {
    if (max_tokens == 0) throw InvalidArgument("segment_paragraphs: max_tokens must be >= 1");
    std::vector<Paragraph> paragraphs;
    Paragraph current{doc.id, 0, {}, 0};
    const auto flush = [&] {
        if (current.token_count == 0 && current.text.empty()) return;
        paragraphs.push_back(current);
        current = Paragraph{doc.id, paragraphs.size(), {}, 0};
    };
    for (const auto& word : whitespace_tokens(doc.text)) {
        std::size_t n = counter(word);
        if (current.token_count > 0 && current.token_count + n > max_tokens) flush();
        if (!current.text.empty()) current.text.push_back(' ');
        current.text += word;
        current.token_count += n;
    }
    flush();
    return paragraphs;
}

std::vector<std::string> split_sentences(std::string_view text, const std::set<std::string>& abbreviations) {
    std::vector<std::string> sentences;
    std::size_t start = 0;
    const auto emit = [&](std::size_t end) {
        auto piece = trim(text.substr(start, end - start));
        if (!piece.empty()) sentences.emplace_back(piece);
        start = end;
    };
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (c == '\n') {
            std::size_t j = i + 1;
            while (j < text.size() && (text[j] == ' ' || text[j] == '\t' || text[j] == '\r')) ++j;
            if (j < text.size() && text[j] == '\n') {
                emit(i);
                i = j + 1;
                continue;
            }
        }
        if (c != '.' && c != '!' && c != '?') {
            ++i;
            continue;
        }
        std::size_t end = i + 1;
        while (end < text.size() && (text[end] == '.' || text[end] == '!' || text[end] == '?')) ++end;
        while (end < text.size() && is_closer(text[end])) ++end;
        if (end < text.size() && !is_space(text[end])) {
            i = end;
            continue;
        }
        if (c == '.' && end == i + 1) {
            std::size_t word_start = i;
            while (word_start > start && !is_space(text[word_start - 1])) --word_start;
            auto word = lower(text.substr(word_start, i + 1 - word_start));
            while (!word.empty() && (word.front() == '"' || word.front() == '(' || word.front() == '\'')) {
                word.erase(word.begin());
            }
            if (abbreviations.contains(word)) {
                i = end;
                continue;
            }
        }
        emit(end);
        i = end;
    }
    emit(text.size());
    return sentences;
}

std::vector<std::string> split_sentences(std::string_view text) {
    return split_sentences(text, Lexicons::defaults().abbreviations);
}

Categorization categorize_claim(const ClaimRecord& claim, const Lexicons& lexicons, const EntityTagger& tagger) {
    Categorization result;
    const auto words = whitespace_tokens(claim.text);
    std::vector<std::string> normalized;
    normalized.reserve(words.size());
    for (const auto& w : words) normalized.push_back(lower(strip_punct(w)));

    const bool question = claim.text.find('?') != std::string::npos ||
                          (!normalized.empty() && lexicons.interrogatives.contains(normalized.front()));
    if (question) result.types.insert({ClaimType::Kind::Question, {}});

    static const std::regex number(R"(^[$€£]?\d+([.,]\d+)*(%|st|nd|rd|th|s|k|m|bn)?$)");
    const bool numerical = std::any_of(normalized.begin(), normalized.end(), [&](const std::string& w) {
        return lexicons.number_words.contains(w) || std::regex_match(w, number);
    });
    if (numerical) result.types.insert({ClaimType::Kind::Numerical, {}});

    // Phrase match on the normalized word sequence.
    const auto mentions = [&](const std::set<std::string>& phrases) {
        for (const auto& phrase : phrases) {
            const auto parts = whitespace_tokens(phrase);
            if (parts.empty() || parts.size() > normalized.size()) continue;
            for (std::size_t i = 0; i + parts.size() <= normalized.size(); ++i) {
                if (std::equal(parts.begin(), parts.end(), normalized.begin() + static_cast<std::ptrdiff_t>(i))) {
                    return true;
                }
            }
        }
        return false;
    };
    if (mentions(lexicons.social_media)) result.types.insert({ClaimType::Kind::SocialMedia, {}});
    if (mentions(lexicons.multimodal)) result.types.insert({ClaimType::Kind::Multimodal, {}});

    if (tagger) {
        try {
            for (const auto& entity : tagger(claim.text)) {
                if (auto kind = parse_entity_kind(entity.kind)) result.types.insert(ClaimType::named_entity(*kind));
            }
        } catch (const std::exception&) {
            result.partial = true;
        }
    }
    return result;
}

}  // namespace veracity::corpus
