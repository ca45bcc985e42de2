#pragma once

#include <cstdint>

namespace fbmsde {

// SplitMix64 finalizer: a bijective avalanche mixer on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seed of replicate `replicate` in cell `cell` of an experiment. Each
// coordinate passes through the mixer, so streams never depend on the
// order in which replicates are executed.
constexpr std::uint64_t replicate_seed(std::uint64_t base_seed, std::uint64_t cell,
                                       std::uint64_t replicate) noexcept {
    return mix64(mix64(mix64(base_seed) ^ cell) ^ (replicate * 0xd1342543de82ef95ULL));
}

} // namespace fbmsde
