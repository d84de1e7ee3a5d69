#pragma once

#include <cstdint>
#include <random>

namespace bguard {

/// Named substream purposes so attack/noise/data draws never share a stream.
enum class Stream : std::uint32_t { data = 1, attack = 2, noise = 3, misc = 4 };

/// Deterministic per-purpose, per-trial generator derived from one root seed.
inline std::mt19937_64 substream(std::uint64_t root_seed, Stream purpose, std::uint64_t trial = 0) {
    std::seed_seq seq{root_seed, static_cast<std::uint64_t>(purpose), trial};
    return std::mt19937_64(seq);
}

}  // namespace bguard
