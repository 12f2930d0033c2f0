#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace veracity::encoder {

std::string base64_encode(std::string_view bytes);
std::string base64_decode(std::string_view text);

// Lowercase hex SHA-256 digest.
std::string sha256_hex(std::string_view data);

// {"dims": [...], "data": base64 of little-endian float32}. Values are
// rounded to float32 on the way in.
nlohmann::json encode_array(const std::vector<double>& values, const std::vector<std::size_t>& dims);

struct DecodedArray {
    std::vector<std::size_t> dims;
    std::vector<double> values;
};

// Throws ServiceError on malformed payloads, size mismatch or non-finite values.
DecodedArray decode_array(const nlohmann::json& j);

// Rounds every value through float32.
std::vector<double> round_to_float(std::vector<double> values);

}  // namespace veracity::encoder
