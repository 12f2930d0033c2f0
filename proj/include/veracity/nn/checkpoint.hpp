#pragma once

#include <filesystem>
#include <vector>

#include <json.hpp>

#include "veracity/nn/tape.hpp"

namespace veracity::nn {

// Layout: "VRCYCKPT", u32 version, metadata JSON string, u32 parameter count,
// then per parameter: name, u32 rank, u64 dims, little-endian f64 values.
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
    nlohmann::json metadata;
    std::vector<Parameter> params;
};

void save_checkpoint(const std::filesystem::path& path, const std::vector<const Parameter*>& params,
                     const nlohmann::json& metadata);
Checkpoint load_checkpoint(const std::filesystem::path& path);

// Copies values by name; every target must be present with a matching shape.
void restore_parameters(const Checkpoint& ckpt, const std::vector<Parameter*>& targets);

}  // namespace veracity::nn
