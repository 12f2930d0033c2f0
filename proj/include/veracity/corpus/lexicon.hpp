#pragma once

#include <filesystem>
#include <set>
#include <string>

namespace veracity::corpus {

// Word lists shipped under data/lexicons/. Entries are lowercase; keyword
// lists may hold multi-word phrases.
struct Lexicons {
    std::set<std::string> stopwords;
    std::set<std::string> abbreviations;
    std::set<std::string> interrogatives;
    std::set<std::string> number_words;
    std::set<std::string> social_media;
    std::set<std::string> multimodal;

    static Lexicons load(const std::filesystem::path& dir);

    // Loaded once from data_dir()/lexicons.
    static const Lexicons& defaults();
};

// $VERACITY_DATA_DIR when set, otherwise the source tree's data/ directory.
std::filesystem::path data_dir();

// One entry per non-empty line, '#' starts a comment, entries lowercased.
std::set<std::string> read_word_list(const std::filesystem::path& path);

}  // namespace veracity::corpus
