#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <utility>

namespace gasket {

/// Exact integer coordinates in the triangular-lattice basis.
/// (a, b) stands for the Euclidean point (a + b/2, b*sqrt(3)/2), so vertex
/// identity and hashing never touch floating point.
struct LatticeCoord {
    std::int32_t a = 0;
    std::int32_t b = 0;

    friend bool operator==(LatticeCoord, LatticeCoord) = default;

    /// Lexicographic by (b, a); the canonical vertex order for exports.
    friend bool operator<(LatticeCoord lhs, LatticeCoord rhs) {
        if (lhs.b != rhs.b) return lhs.b < rhs.b;
        return lhs.a < rhs.a;
    }
};

inline constexpr int kNumDirections = 6;

/// Unit steps of the triangular lattice, listed by ascending angle
/// (0, 60, 120, 180, 240, 300 degrees). Every gasket edge joins coords
/// differing by exactly one of these.
inline constexpr std::array<LatticeCoord, kNumDirections> kDirectionStep = {{
    {1, 0},
    {0, 1},
    {-1, 1},
    {-1, 0},
    {0, -1},
    {1, -1},
}};

inline LatticeCoord step(LatticeCoord v, int direction) {
    const LatticeCoord d = kDirectionStep[static_cast<std::size_t>(direction)];
    return {v.a + d.a, v.b + d.b};
}

/// Direction index of the unit step from `from` to `to`, or -1 if the two
/// coords are not lattice-adjacent.
inline int direction_between(LatticeCoord from, LatticeCoord to) {
    const std::int32_t da = to.a - from.a;
    const std::int32_t db = to.b - from.b;
    for (int i = 0; i < kNumDirections; ++i) {
        if (kDirectionStep[static_cast<std::size_t>(i)].a == da &&
            kDirectionStep[static_cast<std::size_t>(i)].b == db) {
            return i;
        }
    }
    return -1;
}

/// Reflection across the y-axis: (a, b) -> (-a - b, b). An involution that
/// maps the right gasket half onto the left one edge-for-edge.
inline LatticeCoord reflect(LatticeCoord v) {
    return {-v.a - v.b, v.b};
}

/// Euclidean embedding (a + b/2, b*sqrt(3)/2). Rendering support only;
/// all graph logic stays in integer coordinates.
inline std::pair<double, double> to_euclidean(LatticeCoord v) {
    constexpr double kHalfSqrt3 = 0.8660254037844386;
    return {static_cast<double>(v.a) + 0.5 * static_cast<double>(v.b),
            kHalfSqrt3 * static_cast<double>(v.b)};
}

inline std::uint64_t pack(LatticeCoord v) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(v.a)) << 32) |
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(v.b));
}

inline LatticeCoord unpack(std::uint64_t key) {
    return {static_cast<std::int32_t>(static_cast<std::uint32_t>(key >> 32)),
            static_cast<std::int32_t>(static_cast<std::uint32_t>(key))};
}

/// splitmix64 finalizer; also the hash for packed coords.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct CoordHash {
    std::size_t operator()(LatticeCoord v) const noexcept {
        return static_cast<std::size_t>(mix64(pack(v)));
    }
};

}  // namespace gasket
