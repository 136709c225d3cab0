#include "gasket/graph.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

#include <nlohmann/json.hpp>

namespace gasket {

namespace {

// Vertex set of the right half V_n by the doubling recursion:
// V_{n+1} = V_n + copies shifted by (2^n, 0) and (0, 2^n) in lattice coords.
std::vector<LatticeCoord> plus_vertices(int level) {
    std::vector<LatticeCoord> verts = {{0, 0}, {1, 0}, {0, 1}};
    std::unordered_set<std::uint64_t> seen;
    for (const LatticeCoord v : verts) seen.insert(pack(v));
    for (int k = 0; k < level; ++k) {
        const std::int32_t shift = std::int32_t{1} << k;
        const std::size_t base = verts.size();
        for (const LatticeCoord delta : {LatticeCoord{shift, 0}, LatticeCoord{0, shift}}) {
            for (std::size_t i = 0; i < base; ++i) {
                const LatticeCoord w{verts[i].a + delta.a, verts[i].b + delta.b};
                if (seen.insert(pack(w)).second) verts.push_back(w);
            }
        }
    }
    return verts;
}

// Edge list of the right half. Translated copies share corner vertices but
// never edges, so no dedup is needed.
std::vector<std::pair<LatticeCoord, LatticeCoord>> plus_edges(int level) {
    std::vector<std::pair<LatticeCoord, LatticeCoord>> edges = {
        {{0, 0}, {1, 0}},
        {{0, 0}, {0, 1}},
        {{1, 0}, {0, 1}},
    };
    for (int k = 0; k < level; ++k) {
        const std::int32_t shift = std::int32_t{1} << k;
        const std::size_t base = edges.size();
        edges.reserve(base * 3);
        for (const LatticeCoord delta : {LatticeCoord{shift, 0}, LatticeCoord{0, shift}}) {
            for (std::size_t i = 0; i < base; ++i) {
                edges.push_back({{edges[i].first.a + delta.a, edges[i].first.b + delta.b},
                                 {edges[i].second.a + delta.a, edges[i].second.b + delta.b}});
            }
        }
    }
    return edges;
}

}  // namespace

std::string to_string(Half half) {
    switch (half) {
        case Half::Plus: return "plus";
        case Half::Minus: return "minus";
        case Half::Both: return "both";
    }
    return "?";
}

Half half_from_string(const std::string& name) {
    if (name == "plus") return Half::Plus;
    if (name == "minus") return Half::Minus;
    if (name == "both") return Half::Both;
    throw config_error("unknown half: " + name + " (expected plus|minus|both)");
}

PrefractalGraph PrefractalGraph::build(int level, Half half, int max_level) {
    if (level < 0) throw config_error("level must be >= 0");
    if (level > max_level) {
        throw capacity_error("level " + std::to_string(level) +
                             " exceeds the configured memory budget (max " +
                             std::to_string(max_level) + ")");
    }

    std::vector<LatticeCoord> verts = plus_vertices(level);
    std::vector<std::pair<LatticeCoord, LatticeCoord>> edges = plus_edges(level);

    if (half == Half::Minus) {
        for (LatticeCoord& v : verts) v = reflect(v);
        for (auto& e : edges) e = {reflect(e.first), reflect(e.second)};
    } else if (half == Half::Both) {
        // The two halves share only the origin; edge sets are disjoint.
        const std::size_t base_v = verts.size();
        const std::size_t base_e = edges.size();
        std::unordered_set<std::uint64_t> seen;
        seen.reserve(base_v * 2);
        for (const LatticeCoord v : verts) seen.insert(pack(v));
        for (std::size_t i = 0; i < base_v; ++i) {
            const LatticeCoord w = reflect(verts[i]);
            if (seen.insert(pack(w)).second) verts.push_back(w);
        }
        edges.reserve(base_e * 2);
        for (std::size_t i = 0; i < base_e; ++i) {
            edges.push_back({reflect(edges[i].first), reflect(edges[i].second)});
        }
    }

    PrefractalGraph g;
    g.level_ = level;
    g.half_ = half;
    std::sort(verts.begin(), verts.end());
    g.coords_ = std::move(verts);
    g.index_.reserve(g.coords_.size() * 2);
    for (std::uint32_t i = 0; i < g.coords_.size(); ++i) {
        g.index_.emplace(pack(g.coords_[i]), i);
    }

    // CSR adjacency, per-vertex neighbours sorted by direction index.
    std::vector<std::array<std::uint32_t, 4>> nbr(g.coords_.size());
    std::vector<std::uint8_t> deg(g.coords_.size(), 0);
    auto add_arc = [&](LatticeCoord from, LatticeCoord to) {
        const std::uint32_t i = g.index_.at(pack(from));
        assert(deg[i] < 4);
        nbr[i][deg[i]++] = g.index_.at(pack(to));
    };
    for (const auto& [u, v] : edges) {
        add_arc(u, v);
        add_arc(v, u);
    }
    g.offsets_.resize(g.coords_.size() + 1, 0);
    g.adjacency_.resize(edges.size() * 2);
    std::size_t cursor = 0;
    for (std::uint32_t i = 0; i < g.coords_.size(); ++i) {
        g.offsets_[i] = static_cast<std::uint32_t>(cursor);
        std::sort(nbr[i].begin(), nbr[i].begin() + deg[i],
                  [&](std::uint32_t lhs, std::uint32_t rhs) {
                      return direction_between(g.coords_[i], g.coords_[lhs]) <
                             direction_between(g.coords_[i], g.coords_[rhs]);
                  });
        for (int k = 0; k < deg[i]; ++k) g.adjacency_[cursor++] = nbr[i][k];
    }
    g.offsets_.back() = static_cast<std::uint32_t>(cursor);
    return g;
}

std::uint32_t PrefractalGraph::index_of(LatticeCoord v) const {
    const auto it = index_.find(pack(v));
    if (it == index_.end()) {
        throw unknown_vertex_error("vertex (" + std::to_string(v.a) + "," +
                                   std::to_string(v.b) + ") not in graph");
    }
    return it->second;
}

std::vector<LatticeCoord> PrefractalGraph::cyclic_neighbors(LatticeCoord v) const {
    const std::uint32_t i = index_of(v);
    std::vector<LatticeCoord> out;
    out.reserve(static_cast<std::size_t>(degree(i)));
    for (const std::uint32_t j : neighbors(i)) out.push_back(coords_[j]);
    return out;
}

std::vector<LatticeCoord> PrefractalGraph::corner_coords() const {
    const std::int32_t m = std::int32_t{1} << level_;
    const LatticeCoord x{m, 0}, y{0, m}, z{-m, m}, t{-m, 0};
    switch (half_) {
        case Half::Plus: return {x, y};
        case Half::Minus: return {z, t};
        case Half::Both: return {x, y, z, t};
    }
    return {};
}

std::string PrefractalGraph::to_json() const {
    nlohmann::json j;
    j["level"] = level_;
    j["half"] = to_string(half_);
    nlohmann::json verts = nlohmann::json::array();
    for (const LatticeCoord v : coords_) verts.push_back({v.a, v.b});
    j["vertices"] = std::move(verts);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    pairs.reserve(edge_count());
    for (std::uint32_t i = 0; i < coords_.size(); ++i) {
        for (const std::uint32_t k : neighbors(i)) {
            if (i < k) pairs.emplace_back(i, k);
        }
    }
    std::sort(pairs.begin(), pairs.end());
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [i, k] : pairs) edges.push_back({i, k});
    j["edges"] = std::move(edges);
    return j.dump();
}

std::array<LatticeCoord, 4> corners(int level) {
    if (level < 1) throw config_error("corners require level >= 1");
    const std::int32_t m = std::int32_t{1} << level;
    return {LatticeCoord{m, 0}, LatticeCoord{0, m}, LatticeCoord{-m, m}, LatticeCoord{-m, 0}};
}

std::vector<LatticeCoord> cut_set(int level) {
    if (level < 1) throw config_error("cut_set requires level >= 1");
    std::vector<LatticeCoord> verts = plus_vertices(level);
    const std::size_t base = verts.size();
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(base * 2);
    for (const LatticeCoord v : verts) seen.insert(pack(v));
    for (std::size_t i = 0; i < base; ++i) {
        const LatticeCoord w = reflect(verts[i]);
        if (seen.insert(pack(w)).second) verts.push_back(w);
    }
    const auto cs = corners(level);
    std::erase_if(verts, [&](LatticeCoord v) {
        return std::find(cs.begin(), cs.end(), v) != cs.end();
    });
    std::sort(verts.begin(), verts.end());
    return verts;
}

std::vector<LatticeCoord> outer_boundary(const PrefractalGraph& ambient,
                                         std::span<const LatticeCoord> s) {
    const CoordSet members(s);
    std::unordered_set<std::uint64_t> found;
    std::vector<LatticeCoord> out;
    for (const LatticeCoord v : s) {
        const std::uint32_t i = ambient.index_of(v);
        for (const std::uint32_t k : ambient.neighbors(i)) {
            const LatticeCoord w = ambient.coord_of(k);
            if (!members.contains(w) && found.insert(pack(w)).second) out.push_back(w);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace gasket
