#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "veracity/error.hpp"

namespace veracity::corpus {

enum class Label { False = 0, True = 1 };

std::string_view to_string(Label label);
// Only "False" and "True" are accepted; nuanced fact-checker labels are rejected.
std::optional<Label> parse_label(std::string_view text);

enum class EntityKind { Person, Organization, Gpe, Facility };

std::string_view to_string(EntityKind kind);
// Accepts OntoNotes spellings (ORG, FAC) as well as the long forms.
std::optional<EntityKind> parse_entity_kind(std::string_view text);

struct ClaimType {
    enum class Kind { Multimodal, SocialMedia, Question, Numerical, NamedEntity };

    Kind kind = Kind::Question;
    std::optional<EntityKind> entity;  // set iff kind == NamedEntity

    static ClaimType named_entity(EntityKind k) { return {Kind::NamedEntity, k}; }

    auto operator<=>(const ClaimType&) const = default;
};

// "Question", "Numerical", ..., "NamedEntity:PERSON"
std::string to_string(const ClaimType& type);
std::optional<ClaimType> parse_claim_type(std::string_view text);

struct ClaimRecord {
    std::string id;
    std::string text;
    Label label = Label::False;
    std::string claim_source;
    std::string origin_dataset;
    std::set<ClaimType> types;
    // Gold document for retrieval evaluation; absent in most claim files.
    std::optional<std::string> relevant_doc_id;

    bool operator==(const ClaimRecord&) const = default;
};

struct DocumentRecord {
    std::string id;
    std::string url;
    std::string domain;
    std::string text;

    bool operator==(const DocumentRecord&) const = default;
};

struct Paragraph {
    std::string doc_id;
    std::size_t ordinal = 0;
    std::string text;
    std::size_t token_count = 0;

    // "<doc_id>#<ordinal>", unique when doc ids are unique.
    std::string id() const;

    bool operator==(const Paragraph&) const = default;
};

struct RowIssue {
    std::size_t row = 0;  // 1-based data row
    std::string field;
    std::string message;
};

// Thrown by the loaders; carries every rejected row, not just the first.
class RecordError : public ParseError {
public:
    explicit RecordError(std::vector<RowIssue> issues);
    const std::vector<RowIssue>& issues() const noexcept { return issues_; }

private:
    std::vector<RowIssue> issues_;
};

enum class ClaimFormat { Jsonl, Csv };

// Picks the format from the file extension (.csv, otherwise jsonl).
ClaimFormat claim_format_for(const std::filesystem::path& path);

std::vector<ClaimRecord> load_claims(const std::filesystem::path& path, ClaimFormat format);
void save_claims(const std::filesystem::path& path, const std::vector<ClaimRecord>& claims,
                 ClaimFormat format);

std::vector<DocumentRecord> load_documents(const std::filesystem::path& path);
void save_documents(const std::filesystem::path& path, const std::vector<DocumentRecord>& docs);

}  // namespace veracity::corpus
