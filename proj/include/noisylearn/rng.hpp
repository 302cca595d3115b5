#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace noisylearn {

// All randomness in the library flows through this header: a seedable
// 64-bit generator for streams, seed derivation for building independent
// child streams, and a keyed hash over words so that per-word random
// answers are persistent without storing them.

namespace detail {
inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
}  // namespace detail

// Maps a 64-bit value to a double in [0, 1) with 53 bits of precision.
inline double unit_double(std::uint64_t u) {
    return static_cast<double>(u >> 11) * 0x1.0p-53;
}

// splitmix64 stream. Cheap to construct, so child streams are made by
// deriving fresh seeds rather than by sharing generator state.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += detail::kGolden;
        return detail::mix64(state_);
    }

    double next_double() { return unit_double(next_u64()); }

    bool bernoulli(double p) { return next_double() < p; }

    // Unbiased value in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n) {
        std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            std::uint64_t x = next_u64();
            if (x >= threshold) return x % n;
        }
    }

private:
    std::uint64_t state_;
};

// Derives an independent child seed. Same (seed, tag) always gives the
// same child, distinct tags give unrelated streams.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    return detail::mix64(seed + detail::kGolden + detail::mix64(tag + detail::kGolden));
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : tag) h = detail::mix64(h ^ static_cast<unsigned char>(c));
    return derive_seed(seed, h);
}

// Keyed hash of a whole word; the basis of all persistent per-word draws.
inline std::uint64_t word_hash(std::uint64_t key, std::span<const std::uint32_t> word) {
    std::uint64_t h = detail::mix64(key + detail::kGolden);
    h = detail::mix64(h ^ (static_cast<std::uint64_t>(word.size()) + detail::kGolden));
    for (std::uint32_t letter : word)
        h = detail::mix64(h ^ (static_cast<std::uint64_t>(letter) + detail::kGolden));
    return h;
}

// Per-position sub-draw from a word hash. Distinct tags give independent
// draws for the same (word, position).
inline std::uint64_t position_hash(std::uint64_t whash, std::uint64_t position, std::uint64_t tag) {
    return detail::mix64(whash ^ detail::mix64(position * 2 + tag + detail::kGolden));
}

}  // namespace noisylearn
