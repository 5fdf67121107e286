#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace elicit {

inline constexpr std::uint64_t kFnvOffsetBasis = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

// 64-bit FNV-1a. Used for embedding token buckets, cache keys and
// fingerprints, so its output must never change.
constexpr std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = kFnvOffsetBasis) {
    std::uint64_t h = seed;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= kFnvPrime;
    }
    return h;
}

// Murmur3 fmix64 finalizer. FNV-1a's low bits depend only on the low bits
// of the running state, so bucketing by a small modulus needs this first.
constexpr std::uint64_t mix64(std::uint64_t h) {
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
    h *= 0xc4ceb9fe1a85ec53ULL;
    h ^= h >> 33;
    return h;
}

// 16 lowercase hex digits.
std::string to_hex(std::uint64_t value);

inline std::string fingerprint(std::string_view bytes) { return to_hex(fnv1a64(bytes)); }

}  // namespace elicit
