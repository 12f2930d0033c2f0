#include "veracity/encoder/codec.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>

#include <openssl/evp.h>

#include "veracity/error.hpp"

namespace veracity::encoder {

std::string base64_encode(std::string_view bytes) {
    std::string out(4 * ((bytes.size() + 2) / 3), '\0');
    int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                            reinterpret_cast<const unsigned char*>(bytes.data()), static_cast<int>(bytes.size()));
    out.resize(static_cast<std::size_t>(n));
    return out;
}

std::string base64_decode(std::string_view text) {
    if (text.size() % 4 != 0) throw ServiceError("base64: length is not a multiple of 4");
    if (text.empty()) return {};
    std::string out(3 * text.size() / 4, '\0');
    int n = EVP_DecodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                            reinterpret_cast<const unsigned char*>(text.data()), static_cast<int>(text.size()));
    if (n < 0) throw ServiceError("base64: invalid input");
    std::size_t padding = 0;
    if (text.ends_with("==")) {
        padding = 2;
    } else if (text.ends_with('=')) {
        padding = 1;
    }
    out.resize(static_cast<std::size_t>(n) - padding);
    return out;
}

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
        throw Error("sha256: digest failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * length);
    for (unsigned int i = 0; i < length; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xF]);
    }
    return out;
}

nlohmann::json encode_array(const std::vector<double>& values, const std::vector<std::size_t>& dims) {
    std::string bytes;
    bytes.reserve(values.size() * 4);
    for (double v : values) {
        auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(v));
        for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
    }
    return {{"dims", dims}, {"data", base64_encode(bytes)}};
}

DecodedArray decode_array(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("dims") || !j.contains("data") || !j["dims"].is_array() ||
        !j["data"].is_string()) {
        throw ServiceError("array payload must be {dims: [...], data: base64}");
    }
    DecodedArray out;
    for (const auto& d : j["dims"]) {
        if (!d.is_number_integer() || d.get<std::int64_t>() < 0) {
            throw ServiceError("array payload: dims must be non-negative integers");
        }
        out.dims.push_back(d.get<std::size_t>());
    }
    const std::size_t expected =
        std::accumulate(out.dims.begin(), out.dims.end(), std::size_t{1}, std::multiplies<>());
    const auto bytes = base64_decode(j["data"].get<std::string>());
    if (bytes.size() != 4 * expected) throw ServiceError("array payload: data size does not match dims");
    out.values.resize(expected);
    for (std::size_t i = 0; i < expected; ++i) {
        std::uint32_t bits = 0;
        for (int b = 0; b < 4; ++b) bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[4 * i + b])) << (8 * b);
        const float f = std::bit_cast<float>(bits);
        if (!std::isfinite(f)) throw ServiceError("array payload: non-finite value");
        out.values[i] = f;
    }
    return out;
}

std::vector<double> round_to_float(std::vector<double> values) {
    for (auto& v : values) v = static_cast<float>(v);
    return values;
}

}  // namespace veracity::encoder
