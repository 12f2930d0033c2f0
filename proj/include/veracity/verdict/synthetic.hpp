#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "veracity/corpus/records.hpp"
#include "veracity/encoder/client.hpp"
#include "veracity/verdict/features.hpp"

namespace veracity::verdict {

// Generated claims with text evidence, for training checks without a corpus.
//   NliInformative - false claims' evidence carries a negation cue, so the
//                    fixture NLI model contradicts it; true claims are entailed.
//   NliBlind       - evidence overlap and cues are label-independent for NLI;
//                    the label is carried only by class-specific marker words.
enum class SyntheticKind { NliInformative, NliBlind };

struct SyntheticOptions {
    std::size_t claims = 500;
    std::size_t evidence_per_claim = 5;
    // Evidence sentences per claim replaced by unrelated text.
    std::size_t distractors = 1;
    SyntheticKind kind = SyntheticKind::NliInformative;
    std::uint64_t seed = 7;
};

struct SyntheticClaim {
    std::string id;
    std::string text;
    std::vector<std::string> evidence;
    corpus::Label label = corpus::Label::False;
};

// Labels alternate before shuffling, so classes are balanced.
std::vector<SyntheticClaim> generate_synthetic_claims(const SyntheticOptions& options);

std::vector<Example> featurize_all(const std::vector<SyntheticClaim>& claims, encoder::EncoderClient& client,
                                   const FeatureOptions& options);

}  // namespace veracity::verdict
