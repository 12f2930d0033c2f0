#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace veracity::encoder {

enum class CacheMode { Live, Record, Replay };

std::string_view to_string(CacheMode mode);
CacheMode parse_cache_mode(std::string_view text);

// Content-addressed store of encoder responses, persisted as one JSON record
// per line: {"key": ..., "operation": ..., "payload": ...}. Lines are written
// in key order so identical contents give identical files.
class EncoderCache {
public:
    // An empty path gives an in-memory cache. A missing file starts empty.
    explicit EncoderCache(std::filesystem::path path = {});

    // sha256 over operation, model id and the whitespace-collapsed inputs.
    static std::string make_key(std::string_view operation, std::string_view model_id,
                                const std::vector<std::string>& inputs);

    std::optional<nlohmann::json> find(const std::string& key) const;
    void store(const std::string& key, const std::string& operation, nlohmann::json payload);
    std::size_t size() const;

    // Write-temp-then-rename; no-op for in-memory caches.
    void flush() const;

    const std::filesystem::path& path() const { return path_; }

private:
    struct Entry {
        std::string operation;
        nlohmann::json payload;
    };

    std::filesystem::path path_;
    mutable std::mutex mutex_;
    std::map<std::string, Entry> entries_;
};

// Trims and collapses runs of whitespace to a single space.
std::string canonicalize_text(std::string_view text);

}  // namespace veracity::encoder
