#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace hdfts::rng {

// Stream tags. Every random draw in the library comes from an engine whose
// seed is derived from (user seed, tag, indices...), so results do not
// depend on evaluation order or thread count.
inline constexpr std::uint64_t kFactorRow = 1;
inline constexpr std::uint64_t kNoise = 2;
inline constexpr std::uint64_t kReplication = 3;
inline constexpr std::uint64_t kBootstrap = 4;

// One splitmix64 step; a strong enough mixer to decorrelate nearby seeds.
inline std::uint64_t mix(std::uint64_t state) noexcept {
    std::uint64_t z = state + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Fold a list of tags into a base seed, mixing after each absorption.
inline std::uint64_t derive(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) noexcept {
    std::uint64_t s = mix(seed);
    for (std::uint64_t tag : tags) {
        s = mix(s ^ tag);
    }
    return s;
}

inline std::mt19937_64 engine(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
    return std::mt19937_64(derive(seed, tags));
}

}  // namespace hdfts::rng
