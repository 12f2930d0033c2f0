#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace veracity::index {

struct AnalyzerConfig {
    bool lowercase = true;
    bool stem = false;  // plural-stripping S-stemmer
    std::set<std::string> stopwords;

    // Lowercasing, the shipped English stopword list, no stemming.
    static AnalyzerConfig english();

    // Tokenizer rule, lowercasing and stemming packed into one id. The
    // stopword list is persisted separately.
    std::uint32_t id() const;

    bool operator==(const AnalyzerConfig&) const = default;
};

class Analyzer {
public:
    static constexpr std::uint32_t kTokenizerRule = 1;  // split on ASCII non-alphanumerics

    explicit Analyzer(AnalyzerConfig config = AnalyzerConfig::english());

    // Tokens after lowercasing/stemming with stopwords removed.
    std::vector<std::string> analyze(std::string_view text) const;
    // Tokens before stopword removal and stemming.
    std::vector<std::string> tokenize(std::string_view text) const;

    bool is_stopword(std::string_view term) const;
    const AnalyzerConfig& config() const { return config_; }

private:
    AnalyzerConfig config_;
};

// Strips English plural endings: "ies" -> "y", "es" -> "e", "s" -> "".
std::string s_stem(std::string word);

}  // namespace veracity::index
