#include "veracity/index/analyzer.hpp"

#include <cctype>

#include "veracity/corpus/lexicon.hpp"

namespace veracity::index {

AnalyzerConfig AnalyzerConfig::english() {
    AnalyzerConfig config;
    config.stopwords = corpus::Lexicons::defaults().stopwords;
    return config;
}

std::uint32_t AnalyzerConfig::id() const {
    return Analyzer::kTokenizerRule | (lowercase ? 1u << 8 : 0u) | (stem ? 1u << 9 : 0u);
}

Analyzer::Analyzer(AnalyzerConfig config) : config_(std::move(config)) {}

std::vector<std::string> Analyzer::tokenize(std::string_view text) const {
    std::vector<std::string> tokens;
    std::string current;
    for (char ch : text) {
        auto c = static_cast<unsigned char>(ch);
        if (std::isalnum(c) != 0 || c >= 0x80) {
            current.push_back(config_.lowercase ? static_cast<char>(std::tolower(c)) : ch);
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

std::vector<std::string> Analyzer::analyze(std::string_view text) const {
    auto tokens = tokenize(text);
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (auto& t : tokens) {
        if (config_.stopwords.contains(t)) continue;
        out.push_back(config_.stem ? s_stem(std::move(t)) : std::move(t));
    }
    return out;
}

bool Analyzer::is_stopword(std::string_view term) const {
    return config_.stopwords.contains(std::string(term));
}

std::string s_stem(std::string word) {
    const auto ends = [&](std::string_view suffix) { return word.size() > suffix.size() + 1 && word.ends_with(suffix); };
    if (ends("ies") && !word.ends_with("eies") && !word.ends_with("aies")) {
        word.replace(word.size() - 3, 3, "y");
    } else if (ends("es") && !word.ends_with("aes") && !word.ends_with("ees") && !word.ends_with("oes")) {
        word.pop_back();
    } else if (ends("s") && !word.ends_with("us") && !word.ends_with("ss")) {
        word.pop_back();
    }
    return word;
}

}  // namespace veracity::index
