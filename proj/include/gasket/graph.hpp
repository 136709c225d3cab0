#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "gasket/errors.hpp"
#include "gasket/lattice.hpp"

namespace gasket {

enum class Half { Plus, Minus, Both };

std::string to_string(Half half);
Half half_from_string(const std::string& name);

/// Largest level build() accepts by default. Level 13 (Both) is about
/// 4.8M vertices / 9.6M directed edge slots, a few hundred MB resident.
inline constexpr int kDefaultMaxLevel = 13;

/// Unordered membership set over lattice coords.
class CoordSet {
  public:
    CoordSet() = default;
    explicit CoordSet(std::span<const LatticeCoord> coords) {
        keys_.reserve(coords.size());
        for (const LatticeCoord v : coords) keys_.insert(pack(v));
    }
    void insert(LatticeCoord v) { keys_.insert(pack(v)); }
    bool contains(LatticeCoord v) const { return keys_.count(pack(v)) != 0; }
    std::size_t size() const { return keys_.size(); }

  private:
    std::unordered_set<std::uint64_t> keys_;
};

/// A level-n Sierpinski gasket prefractal (right half, left half or both),
/// built by the triangle-doubling recursion. Immutable after construction
/// and safe to share across threads.
///
/// Vertices are stored sorted lexicographically by (b, a); per-vertex
/// neighbour lists are sorted by ascending direction index, which realizes
/// the anticlockwise cyclic order with the cycle start fixed at the smallest
/// present direction.
class PrefractalGraph {
  public:
    static PrefractalGraph build(int level, Half half, int max_level = kDefaultMaxLevel);

    int level() const { return level_; }
    Half half() const { return half_; }
    std::size_t vertex_count() const { return coords_.size(); }
    std::size_t edge_count() const { return adjacency_.size() / 2; }

    /// All vertices, sorted by (b, a).
    const std::vector<LatticeCoord>& vertices() const { return coords_; }

    bool contains(LatticeCoord v) const { return index_.count(pack(v)) != 0; }

    std::uint32_t index_of(LatticeCoord v) const;
    LatticeCoord coord_of(std::uint32_t index) const { return coords_[index]; }

    int degree(std::uint32_t index) const {
        return static_cast<int>(offsets_[index + 1] - offsets_[index]);
    }

    /// Neighbour indices of a vertex, sorted by direction index.
    std::span<const std::uint32_t> neighbors(std::uint32_t index) const {
        return {adjacency_.data() + offsets_[index],
                adjacency_.data() + offsets_[index + 1]};
    }

    /// Anticlockwise neighbour list of v (canonical cycle start at the
    /// smallest present direction index).
    std::vector<LatticeCoord> cyclic_neighbors(LatticeCoord v) const;

    /// Corner vertices present in this half: {x_n, y_n} for Plus,
    /// {z_n, t_n} for Minus, all four for Both.
    std::vector<LatticeCoord> corner_coords() const;

    /// Deterministic JSON export: {level, half, vertices, edges} with
    /// vertices in (b, a) order and edges as sorted index pairs.
    std::string to_json() const;

  private:
    PrefractalGraph() = default;

    int level_ = 0;
    Half half_ = Half::Plus;
    std::vector<LatticeCoord> coords_;
    std::unordered_map<std::uint64_t, std::uint32_t> index_;
    std::vector<std::uint32_t> offsets_;
    std::vector<std::uint32_t> adjacency_;
};

/// The four cut vertices x_n=(2^n,0), y_n=(0,2^n), z_n=(-2^n,2^n),
/// t_n=(-2^n,0) separating SG_n from the rest of the gasket. n >= 1.
std::array<LatticeCoord, 4> corners(int level);

/// S_n: the vertex set of SG_n (both halves) minus the four corners.
/// Sorted by (b, a). n >= 1.
std::vector<LatticeCoord> cut_set(int level);

/// Outer boundary of S within the ambient graph: vertices outside S with a
/// neighbour in S. Sorted by (b, a).
std::vector<LatticeCoord> outer_boundary(const PrefractalGraph& ambient,
                                         std::span<const LatticeCoord> s);

}  // namespace gasket
