#include "veracity/verdict/synthetic.hpp"

#include <algorithm>
#include <random>

#include "veracity/error.hpp"

namespace veracity::verdict {

namespace {

std::string make_word(std::mt19937_64& rng) {
    static const char* onsets[] = {"b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z", "br", "tr"};
    static const char* vowels[] = {"a", "e", "i", "o", "u", "ai", "ou"};
    std::string w;
    const int syllables = 2 + static_cast<int>(rng() % 2);
    for (int i = 0; i < syllables; ++i) {
        w += onsets[rng() % std::size(onsets)];
        w += vowels[rng() % std::size(vowels)];
    }
    w += onsets[rng() % 14];
    return w;
}

std::vector<std::string> vocabulary(std::mt19937_64& rng, std::size_t n) {
    std::vector<std::string> words;
    while (words.size() < n) {
        std::string w = make_word(rng);
        if (std::find(words.begin(), words.end(), w) == words.end()) words.push_back(std::move(w));
    }
    return words;
}

std::string join(const std::vector<std::string>& words) {
    std::string out;
    for (const auto& w : words) {
        if (!out.empty()) out += ' ';
        out += w;
    }
    return out;
}

}  // namespace

std::vector<SyntheticClaim> generate_synthetic_claims(const SyntheticOptions& o) {
    if (o.claims == 0 || o.evidence_per_claim == 0) throw InvalidArgument("synthetic: counts must be positive");
    if (o.distractors >= o.evidence_per_claim) throw InvalidArgument("synthetic: too many distractors");
    std::mt19937_64 rng(o.seed);
    const auto topics = vocabulary(rng, 400);
    const auto fillers = vocabulary(rng, 120);
    const std::vector<std::string> negation_cues{"not", "hoax", "debunked", "fake", "myth"};
    const std::vector<std::string> true_markers{"officially", "confirmed"};
    const std::vector<std::string> false_markers{"viral", "rumour"};

    auto pick = [&](const std::vector<std::string>& from, std::size_t n) {
        std::vector<std::string> out;
        for (std::size_t i = 0; i < n; ++i) out.push_back(from[rng() % from.size()]);
        return out;
    };

    std::vector<SyntheticClaim> claims;
    for (std::size_t c = 0; c < o.claims; ++c) {
        SyntheticClaim sc;
        sc.id = "synth-" + std::to_string(c);
        sc.label = c % 2 == 0 ? corpus::Label::True : corpus::Label::False;
        std::vector<std::string> claim_words = pick(topics, 6);
        sc.text = join(claim_words);

        for (std::size_t e = 0; e < o.evidence_per_claim; ++e) {
            std::vector<std::string> words;
            if (e >= o.evidence_per_claim - o.distractors) {
                words = pick(topics, 5);
                auto extra = pick(fillers, 3);
                words.insert(words.end(), extra.begin(), extra.end());
            } else {
                // The lead sentence restates the claim; the rest share part of it.
                std::vector<std::string> shared = claim_words;
                std::shuffle(shared.begin(), shared.end(), rng);
                if (e > 0) shared.resize(4);
                words = shared;
                auto extra = pick(fillers, e == 0 ? 1 : 3);
                words.insert(words.end(), extra.begin(), extra.end());
                if (o.kind == SyntheticKind::NliInformative) {
                    if (sc.label == corpus::Label::False) words.push_back(negation_cues[rng() % negation_cues.size()]);
                } else {
                    const auto& markers = sc.label == corpus::Label::True ? true_markers : false_markers;
                    words.insert(words.end(), markers.begin(), markers.end());
                }
                std::shuffle(words.begin(), words.end(), rng);
            }
            sc.evidence.push_back(join(words));
        }
        claims.push_back(std::move(sc));
    }
    std::shuffle(claims.begin(), claims.end(), rng);
    return claims;
}

std::vector<Example> featurize_all(const std::vector<SyntheticClaim>& claims, encoder::EncoderClient& client,
                                   const FeatureOptions& options) {
    std::vector<Example> out;
    out.reserve(claims.size());
    for (const auto& c : claims) out.push_back({featurize(c.id, c.text, c.evidence, client, options), c.label});
    return out;
}

}  // namespace veracity::verdict
