#include "veracity/encoder/cache.hpp"

#include <cctype>
#include <fstream>

#include "veracity/encoder/codec.hpp"
#include "veracity/error.hpp"

namespace veracity::encoder {

std::string_view to_string(CacheMode mode) {
    switch (mode) {
        case CacheMode::Live: return "live";
        case CacheMode::Record: return "record";
        case CacheMode::Replay: return "replay";
    }
    return "live";
}

CacheMode parse_cache_mode(std::string_view text) {
    if (text == "live") return CacheMode::Live;
    if (text == "record") return CacheMode::Record;
    if (text == "replay") return CacheMode::Replay;
    throw InvalidArgument("unknown cache mode '" + std::string(text) + "'");
}

std::string canonicalize_text(std::string_view text) {
    std::string out;
    bool pending_space = false;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c)) != 0) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.push_back(c);
    }
    return out;
}

EncoderCache::EncoderCache(std::filesystem::path path) : path_(std::move(path)) {
    if (path_.empty() || !std::filesystem::exists(path_)) return;
    std::ifstream in(path_, std::ios::binary);
    if (!in) throw ServiceError("cannot open cache " + path_.string());
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error&) {
            throw ServiceError("cache " + path_.string() + ": malformed record on line " + std::to_string(row));
        }
        if (!j.contains("key") || !j.contains("operation") || !j.contains("payload")) {
            throw ServiceError("cache " + path_.string() + ": incomplete record on line " + std::to_string(row));
        }
        entries_[j["key"].get<std::string>()] = {j["operation"].get<std::string>(), std::move(j["payload"])};
    }
}

std::string EncoderCache::make_key(std::string_view operation, std::string_view model_id,
                                   const std::vector<std::string>& inputs) {
    // Length-prefixed fields so that no two input lists share an encoding.
    std::string material;
    const auto field = [&](std::string_view s) {
        material += std::to_string(s.size());
        material.push_back(':');
        material.append(s);
    };
    field(operation);
    field(model_id);
    for (const auto& input : inputs) field(canonicalize_text(input));
    return sha256_hex(material);
}

std::optional<nlohmann::json> EncoderCache::find(const std::string& key) const {
    std::lock_guard lock(mutex_);
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second.payload;
}

void EncoderCache::store(const std::string& key, const std::string& operation, nlohmann::json payload) {
    std::lock_guard lock(mutex_);
    entries_[key] = {operation, std::move(payload)};
}

std::size_t EncoderCache::size() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
}

void EncoderCache::flush() const {
    if (path_.empty()) return;
    std::lock_guard lock(mutex_);
    auto tmp = path_;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ServiceError("cannot write cache " + tmp.string());
        for (const auto& [key, entry] : entries_) {
            nlohmann::json j = {{"key", key}, {"operation", entry.operation}, {"payload", entry.payload}};
            out << j.dump() << '\n';
        }
        if (!out) throw ServiceError("failed writing cache " + tmp.string());
    }
    std::filesystem::rename(tmp, path_);
}

}  // namespace veracity::encoder
