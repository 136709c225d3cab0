#pragma once

#include <cstdint>
#include <span>

#include "gasket/lattice.hpp"

namespace gasket {

/// Counter-based splitmix64 stream. Tiny state, no warm-up, and a seed is a
/// full description of the stream, which keeps parallel and serial runs
/// byte-identical. All integer/double draws are implemented here rather than
/// through <random> distributions so the outputs are platform-independent.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1), 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Unbiased uniform integer in [0, n). Lemire multiply-shift with
    /// rejection.
    std::uint64_t next_below(std::uint64_t n) {
        std::uint64_t x = next_u64();
        unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            const std::uint64_t threshold = -n % n;
            while (lo < threshold) {
                x = next_u64();
                m = static_cast<unsigned __int128>(x) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

  private:
    std::uint64_t state_;
};

/// Seed derivation for independent sub-streams: hash-chains the inputs
/// through the splitmix64 finalizer. Used for per-trial streams
/// derive(master, trial, level) and per-vertex streams derive(seed, pack(v)).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t key) {
    return mix64(mix64(master) ^ (key + 0x632be59bd9b4e019ULL));
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t key1,
                                 std::uint64_t key2) {
    return derive_seed(derive_seed(master, key1), key2);
}

}  // namespace gasket
