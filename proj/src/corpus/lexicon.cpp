#include "veracity/corpus/lexicon.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>

#include "veracity/error.hpp"

namespace veracity::corpus {

std::filesystem::path data_dir() {
    if (const char* env = std::getenv("VERACITY_DATA_DIR"); env != nullptr && *env != '\0') return env;
    return VERACITY_DEFAULT_DATA_DIR;
}

std::set<std::string> read_word_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open word list " + path.string());
    std::set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto last = line.find_last_not_of(" \t\r");
        std::string word = line.substr(first, last - first + 1);
        std::transform(word.begin(), word.end(), word.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        words.insert(std::move(word));
    }
    return words;
}

Lexicons Lexicons::load(const std::filesystem::path& dir) {
    Lexicons lex;
    lex.stopwords = read_word_list(dir / "stopwords_en.v1.txt");
    lex.abbreviations = read_word_list(dir / "abbreviations.v1.txt");
    lex.interrogatives = read_word_list(dir / "interrogatives.v1.txt");
    lex.number_words = read_word_list(dir / "number_words.v1.txt");
    lex.social_media = read_word_list(dir / "social_media.v1.txt");
    lex.multimodal = read_word_list(dir / "multimodal.v1.txt");
    return lex;
}

const Lexicons& Lexicons::defaults() {
    static const Lexicons lex = load(data_dir() / "lexicons");
    return lex;
}

}  // namespace veracity::corpus
