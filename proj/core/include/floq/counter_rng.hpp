#pragma once

#include <cstdint>

namespace floq {

// Stateless counter-mode randomness: every draw is a pure function of
// (seed, counter, salt), so evaluation at any stream position is
// reproducible in both time directions and across threads.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t counter_hash(std::uint64_t seed, std::int64_t counter,
                                  std::uint64_t salt = 0) {
    std::uint64_t h = splitmix64(seed);
    h ^= splitmix64(static_cast<std::uint64_t>(counter) +
                    salt * 0x632BE59BD9B4E019ULL);
    return splitmix64(h);
}

/// uniform double in [0, 1) from 53 high bits
inline double u01(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

} // namespace floq
