#pragma once

#include <cstdint>
#include <cstddef>
#include <numeric>
#include <vector>

namespace ca2d {

// SplitMix64 output mix (Steele, Lea & Flood). Bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Deterministic keyed generator used for every piece of key-derived or
// trial-derived randomness, so results are identical across platforms
// and builds. Not cryptographically strong; key schedules built on it
// inherit that caveat.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix64(state_);
    }

    // Uniform in [0, bound). Modulo bias is negligible for the bounds
    // used here (all far below 2^32).
    std::uint64_t next_below(std::uint64_t bound) { return next() % bound; }

    bool next_bit() { return next() >> 63; }

private:
    std::uint64_t state_;
};

// Collapses (base, a, b) into a seed for an independent stream. Feeding
// the indices through the full generator keeps streams for neighboring
// (a, b) pairs unrelated.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
    SplitMix64 g(base);
    std::uint64_t s = g.next() ^ mix64(a + 0x9E3779B97F4A7C15ULL);
    return mix64(s + mix64(b + 0x2545F4914F6CDD1DULL));
}

// Fisher-Yates permutation of {0, ..., n-1} drawn from g.
inline std::vector<std::uint32_t> keyed_permutation(std::size_t n, SplitMix64& g) {
    std::vector<std::uint32_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0u);
    for (std::size_t i = n; i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(g.next_below(i));
        std::swap(perm[i - 1], perm[j]);
    }
    return perm;
}

inline std::vector<std::uint32_t> invert_permutation(const std::vector<std::uint32_t>& perm) {
    std::vector<std::uint32_t> inv(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i)
        inv[perm[i]] = static_cast<std::uint32_t>(i);
    return inv;
}

} // namespace ca2d
