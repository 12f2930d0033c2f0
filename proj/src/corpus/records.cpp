#include "veracity/corpus/records.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

namespace veracity::corpus {

using nlohmann::json;

std::string_view to_string(Label label) { return label == Label::True ? "True" : "False"; }

std::optional<Label> parse_label(std::string_view text) {
    if (text == "True") return Label::True;
    if (text == "False") return Label::False;
    return std::nullopt;
}

std::string_view to_string(EntityKind kind) {
    switch (kind) {
        case EntityKind::Person: return "PERSON";
        case EntityKind::Organization: return "ORGANIZATION";
        case EntityKind::Gpe: return "GPE";
        case EntityKind::Facility: return "FACILITY";
    }
    return "PERSON";
}

std::optional<EntityKind> parse_entity_kind(std::string_view text) {
    if (text == "PERSON") return EntityKind::Person;
    if (text == "ORGANIZATION" || text == "ORG") return EntityKind::Organization;
    if (text == "GPE") return EntityKind::Gpe;
    if (text == "FACILITY" || text == "FAC") return EntityKind::Facility;
    return std::nullopt;
}

std::string to_string(const ClaimType& type) {
    switch (type.kind) {
        case ClaimType::Kind::Multimodal: return "Multimodal";
        case ClaimType::Kind::SocialMedia: return "SocialMedia";
        case ClaimType::Kind::Question: return "Question";
        case ClaimType::Kind::Numerical: return "Numerical";
        case ClaimType::Kind::NamedEntity:
            return "NamedEntity:" + std::string(to_string(type.entity.value_or(EntityKind::Person)));
    }
    return {};
}

std::optional<ClaimType> parse_claim_type(std::string_view text) {
    using K = ClaimType::Kind;
    if (text == "Multimodal") return ClaimType{K::Multimodal, {}};
    if (text == "SocialMedia") return ClaimType{K::SocialMedia, {}};
    if (text == "Question") return ClaimType{K::Question, {}};
    if (text == "Numerical") return ClaimType{K::Numerical, {}};
    constexpr std::string_view prefix = "NamedEntity:";
    if (text.starts_with(prefix)) {
        if (auto kind = parse_entity_kind(text.substr(prefix.size()))) return ClaimType::named_entity(*kind);
    }
    return std::nullopt;
}

std::string Paragraph::id() const { return doc_id + "#" + std::to_string(ordinal); }

namespace {

std::string describe(const std::vector<RowIssue>& issues) {
    std::ostringstream out;
    out << issues.size() << " malformed row(s):";
    for (const auto& issue : issues) {
        out << " [row " << issue.row << ", field '" << issue.field << "': " << issue.message << "]";
    }
    return out.str();
}

bool blank(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

// RFC 4180 records: quoted fields may contain separators, doubled quotes and newlines.
std::vector<std::vector<std::string>> parse_csv(std::istream& in) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool any = false;
    char c = 0;
    while (in.get(c)) {
        any = true;
        if (quoted) {
            if (c == '"') {
                if (in.peek() == '"') {
                    field.push_back('"');
                    in.get();
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && in.peek() == '\n') in.get();
            row.push_back(std::move(field));
            field.clear();
            if (!(row.size() == 1 && row[0].empty())) rows.push_back(std::move(row));
            row.clear();
            any = false;
        } else {
            field.push_back(c);
        }
    }
    if (quoted) throw ParseError("csv: unterminated quoted field");
    if (any) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string csv_escape(std::string_view value) {
    if (value.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(value);
    std::string out = "\"";
    for (char c : value) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

// Validates one claim given its raw fields, appending problems to `issues`.
std::optional<ClaimRecord> make_claim(std::size_t row, const std::map<std::string, std::string>& fields,
                                      const std::vector<std::string>& types,
                                      std::vector<RowIssue>& issues) {
    const auto get = [&](const std::string& key) -> std::optional<std::string> {
        auto it = fields.find(key);
        if (it == fields.end()) return std::nullopt;
        return it->second;
    };
    std::size_t before = issues.size();
    ClaimRecord claim;
    for (const char* key : {"id", "text", "label", "claim_source", "origin_dataset"}) {
        if (!get(key)) issues.push_back({row, key, "missing"});
    }
    if (issues.size() != before) return std::nullopt;

    claim.id = *get("id");
    claim.text = *get("text");
    claim.claim_source = *get("claim_source");
    claim.origin_dataset = *get("origin_dataset");
    if (claim.id.empty()) issues.push_back({row, "id", "empty"});
    if (blank(claim.text)) issues.push_back({row, "text", "empty after trimming"});
    if (auto label = parse_label(*get("label"))) {
        claim.label = *label;
    } else {
        issues.push_back({row, "label", "unsupported label '" + *get("label") + "' (expected False or True)"});
    }
    for (const auto& t : types) {
        if (auto parsed = parse_claim_type(t)) {
            claim.types.insert(*parsed);
        } else {
            issues.push_back({row, "types", "unknown claim type '" + t + "'"});
        }
    }
    if (auto gold = get("relevant_doc_id"); gold && !gold->empty()) claim.relevant_doc_id = *gold;
    if (issues.size() != before) return std::nullopt;
    return claim;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    return out;
}

}  // namespace

RecordError::RecordError(std::vector<RowIssue> issues)
    : ParseError(describe(issues)), issues_(std::move(issues)) {}

ClaimFormat claim_format_for(const std::filesystem::path& path) {
    return path.extension() == ".csv" ? ClaimFormat::Csv : ClaimFormat::Jsonl;
}

std::vector<ClaimRecord> load_claims(const std::filesystem::path& path, ClaimFormat format) {
    auto in = open_input(path);
    std::vector<ClaimRecord> claims;
    std::vector<RowIssue> issues;
    std::unordered_set<std::string> seen;

    const auto accept = [&](std::size_t row, std::optional<ClaimRecord> claim) {
        if (!claim) return;
        if (!seen.insert(claim->id).second) {
            issues.push_back({row, "id", "duplicate id '" + claim->id + "'"});
            return;
        }
        claims.push_back(std::move(*claim));
    };

    if (format == ClaimFormat::Jsonl) {
        std::string line;
        std::size_t row = 0;
        while (std::getline(in, line)) {
            ++row;
            if (blank(line)) continue;
            json j;
            try {
                j = json::parse(line);
            } catch (const json::parse_error& e) {
                issues.push_back({row, "<record>", e.what()});
                continue;
            }
            if (!j.is_object()) {
                issues.push_back({row, "<record>", "not an object"});
                continue;
            }
            std::map<std::string, std::string> fields;
            std::vector<std::string> types;
            bool bad = false;
            for (const auto& [key, value] : j.items()) {
                if (key == "types") {
                    if (!value.is_array()) {
                        issues.push_back({row, "types", "not an array"});
                        bad = true;
                        continue;
                    }
                    for (const auto& t : value) {
                        if (t.is_string()) {
                            types.push_back(t.get<std::string>());
                        } else {
                            issues.push_back({row, "types", "non-string entry"});
                            bad = true;
                        }
                    }
                } else if (value.is_string()) {
                    fields[key] = value.get<std::string>();
                } else if (!value.is_null()) {
                    issues.push_back({row, key, "not a string"});
                    bad = true;
                }
            }
            if (bad) continue;
            accept(row, make_claim(row, fields, types, issues));
        }
    } else {
        auto rows = parse_csv(in);
        if (!rows.empty()) {
            const auto header = rows.front();
            for (std::size_t r = 1; r < rows.size(); ++r) {
                const auto& values = rows[r];
                if (values.size() != header.size()) {
                    issues.push_back({r, "<record>", "expected " + std::to_string(header.size()) + " fields, got " +
                                                         std::to_string(values.size())});
                    continue;
                }
                std::map<std::string, std::string> fields;
                std::vector<std::string> types;
                for (std::size_t c = 0; c < header.size(); ++c) {
                    if (header[c] == "types") {
                        std::istringstream ts(values[c]);
                        std::string t;
                        while (std::getline(ts, t, ';')) {
                            if (!t.empty()) types.push_back(t);
                        }
                    } else {
                        fields[header[c]] = values[c];
                    }
                }
                accept(r, make_claim(r, fields, types, issues));
            }
        }
    }
    if (!issues.empty()) throw RecordError(std::move(issues));
    return claims;
}

void save_claims(const std::filesystem::path& path, const std::vector<ClaimRecord>& claims, ClaimFormat format) {
    auto out = open_output(path);
    if (format == ClaimFormat::Jsonl) {
        for (const auto& c : claims) {
            json j = {{"id", c.id},
                      {"text", c.text},
                      {"label", std::string(to_string(c.label))},
                      {"claim_source", c.claim_source},
                      {"origin_dataset", c.origin_dataset}};
            json types = json::array();
            for (const auto& t : c.types) types.push_back(to_string(t));
            j["types"] = std::move(types);
            if (c.relevant_doc_id) j["relevant_doc_id"] = *c.relevant_doc_id;
            out << j.dump() << '\n';
        }
        return;
    }
    out << "id,text,label,claim_source,origin_dataset,types,relevant_doc_id\n";
    for (const auto& c : claims) {
        std::string types;
        for (const auto& t : c.types) {
            if (!types.empty()) types += ';';
            types += to_string(t);
        }
        out << csv_escape(c.id) << ',' << csv_escape(c.text) << ',' << to_string(c.label) << ','
            << csv_escape(c.claim_source) << ',' << csv_escape(c.origin_dataset) << ',' << csv_escape(types) << ','
            << csv_escape(c.relevant_doc_id.value_or("")) << '\n';
    }
}

std::vector<DocumentRecord> load_documents(const std::filesystem::path& path) {
    auto in = open_input(path);
    std::vector<DocumentRecord> docs;
    std::vector<RowIssue> issues;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (blank(line)) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            issues.push_back({row, "<record>", e.what()});
            continue;
        }
        DocumentRecord doc;
        std::size_t before = issues.size();
        for (auto [key, target] : {std::pair{"id", &doc.id}, std::pair{"url", &doc.url},
                                   std::pair{"domain", &doc.domain}, std::pair{"text", &doc.text}}) {
            if (!j.is_object() || !j.contains(key) || !j[key].is_string()) {
                issues.push_back({row, key, "missing or not a string"});
            } else {
                *target = j[key].get<std::string>();
            }
        }
        if (issues.size() != before) continue;
        if (doc.id.empty()) issues.push_back({row, "id", "empty"});
        if (blank(doc.text)) issues.push_back({row, "text", "empty after trimming"});
        if (issues.size() != before) continue;
        if (!seen.insert(doc.id).second) {
            issues.push_back({row, "id", "duplicate id '" + doc.id + "'"});
            continue;
        }
        docs.push_back(std::move(doc));
    }
    if (!issues.empty()) throw RecordError(std::move(issues));
    return docs;
}

void save_documents(const std::filesystem::path& path, const std::vector<DocumentRecord>& docs) {
    auto out = open_output(path);
    for (const auto& d : docs) {
        out << json{{"id", d.id}, {"url", d.url}, {"domain", d.domain}, {"text", d.text}}.dump() << '\n';
    }
}

}  // namespace veracity::corpus
