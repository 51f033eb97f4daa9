#pragma once

#include <cstdint>

namespace dsbb84 {

/// Small counter-based PRNG (splitmix64). Chosen over std engines so
/// that streams derived from (seed, chunk index) are identical across
/// platforms and standard-library implementations.
class RngStream {
public:
    explicit RngStream(std::uint64_t state) : state_(state) {}

    /// Stream for one pulse chunk; independent streams for distinct
    /// chunk indices under the same session seed.
    static RngStream for_chunk(std::uint64_t seed, std::uint64_t chunk_index) {
        std::uint64_t s = seed ^ (0x9E3779B97F4A7C15ULL * (chunk_index + 1));
        return RngStream(scramble(s));
    }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return scramble(state_);
    }

    /// Uniform double in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool next_bit() { return (next_u64() & 1ULL) != 0; }

private:
    static std::uint64_t scramble(std::uint64_t z) {
        z ^= z >> 30; z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27; z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t state_;
};

} // namespace dsbb84
