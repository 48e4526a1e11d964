#pragma once

#include <cstdint>
#include <random>
#include <unordered_map>
#include <vector>

namespace tokompiler {

// All randomized behavior in the toolkit goes through mt19937_64 with
// explicit bounding, never std::uniform_int_distribution, so sequences are
// bit-identical across standard library implementations.
using Rng = std::mt19937_64;

/// Uniform integer in [0, n) by rejection sampling on the raw 64-bit output.
inline std::uint64_t bounded_u64(Rng& rng, std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = rng();
    while (v >= limit) v = rng();
    return v % n;
}

/// Uniform draw in [0, 1).
inline double unit_real(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// k distinct values sampled uniformly from [lo, hi], in draw order.
/// Sparse partial Fisher-Yates; memory is O(k) regardless of range width.
inline std::vector<std::int64_t> sample_without_replacement(Rng& rng, std::int64_t lo,
                                                            std::int64_t hi, std::size_t k) {
    const std::uint64_t width = static_cast<std::uint64_t>(hi - lo) + 1;
    std::unordered_map<std::uint64_t, std::uint64_t> moved;
    std::vector<std::int64_t> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        const std::uint64_t j = i + bounded_u64(rng, width - i);
        auto at = [&](std::uint64_t idx) {
            auto it = moved.find(idx);
            return it == moved.end() ? idx : it->second;
        };
        const std::uint64_t picked = at(j);
        moved[j] = at(i);
        out.push_back(lo + static_cast<std::int64_t>(picked));
    }
    return out;
}

/// FNV-1a, used to derive stable per-unit seeds from a run seed.
inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::uint64_t derive_unit_seed(std::uint64_t run_seed, const std::string& unit_id) {
    return run_seed ^ fnv1a64(unit_id);
}

} // namespace tokompiler
