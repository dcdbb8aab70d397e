#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "longdiff/rpe.hpp"

namespace longdiff {

using json = nlohmann::json;

// Run-level hyperparameters. Defaults are the long-video setting: 128 frames,
// 16 groups, neighbor range 8, 8 key frames, entropy weight 2, half of the
// temporal layers replaced, and a rotary head with 32 of 64 dims rotated.
struct RunConfig {
    std::size_t N = 128;
    std::size_t G = 16;
    std::size_t L = 8;
    std::size_t n = 8;
    double alpha = 2.0;
    double replace_fraction = 0.5;
    std::uint64_t seed = 0;
    RPEKind rpe = Rotary{64, 32, 10000.0};

    void validate() const;

    bool operator==(const RunConfig&) const = default;
};

json to_json(const RPEKind& rpe);
RPEKind rpe_from_json(const json& j);

// Field names are exactly N, G, L, n, alpha, replace_fraction, seed, rpe.
json to_json(const RunConfig& cfg);
RunConfig run_config_from_json(const json& j);

RunConfig load_run_config(const std::filesystem::path& path);
void save_run_config(const RunConfig& cfg, const std::filesystem::path& path);

json load_json(const std::filesystem::path& path);
void save_json(const json& j, const std::filesystem::path& path);

}  // namespace longdiff
