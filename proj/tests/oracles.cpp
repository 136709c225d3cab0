#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oracle {

namespace {

Edge make_edge(XY u, XY v) { return u < v ? Edge{u, v} : Edge{v, u}; }

XY shift(XY v, XY delta) { return {v.first + delta.first, v.second + delta.second}; }

XY mirror(XY v) { return {-v.first, v.second}; }

}  // namespace

XY to_doubled(gasket::LatticeCoord v) { return {2LL * v.a + v.b, v.b}; }

EnumGraph enum_build(int level, gasket::Half half) {
    // V_0 = {(0,0), (1,0), (1/2, sqrt3/2)} in doubled coordinates
    std::set<XY> verts = {{0, 0}, {2, 0}, {1, 1}};
    std::set<Edge> edges = {make_edge({0, 0}, {2, 0}), make_edge({0, 0}, {1, 1}),
                            make_edge({2, 0}, {1, 1})};
    for (int k = 0; k < level; ++k) {
        // Euclidean shifts at the step from level k to k+1 are (2^k, 0) and
        // (2^(k-1), 2^(k-1) sqrt 3); doubling the x component makes them
        // (2^(k+1), 0) and (2^k, 2^k).
        const long long m = 1LL << k;
        const XY shift_a{2 * m, 0};
        const XY shift_b{m, m};
        std::set<XY> next_verts = verts;
        std::set<Edge> next_edges = edges;
        for (const XY& delta : {shift_a, shift_b}) {
            for (const XY& v : verts) next_verts.insert(shift(v, delta));
            for (const Edge& e : edges) {
                next_edges.insert(make_edge(shift(e.first, delta), shift(e.second, delta)));
            }
        }
        verts = std::move(next_verts);
        edges = std::move(next_edges);
    }
    EnumGraph g;
    switch (half) {
        case gasket::Half::Plus:
            g.vertices = std::move(verts);
            g.edges = std::move(edges);
            break;
        case gasket::Half::Minus:
            for (const XY& v : verts) g.vertices.insert(mirror(v));
            for (const Edge& e : edges) {
                g.edges.insert(make_edge(mirror(e.first), mirror(e.second)));
            }
            break;
        case gasket::Half::Both:
            g.vertices = verts;
            g.edges = edges;
            for (const XY& v : verts) g.vertices.insert(mirror(v));
            for (const Edge& e : edges) {
                g.edges.insert(make_edge(mirror(e.first), mirror(e.second)));
            }
            break;
    }
    return g;
}

SeqToppleResult stabilize_sequential(const gasket::Domain& domain,
                                     const std::vector<std::int64_t>& sigma) {
    const std::size_t n = domain.size();
    SeqToppleResult result;
    result.final = sigma;
    result.topples.assign(n, 0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::uint32_t v = 0; v < n; ++v) {
            if (result.final[v] >= 4) {
                result.final[v] -= 4;
                result.topples[v] += 1;
                for (const std::uint32_t w : domain.in_domain_neighbors(v)) {
                    result.final[w] += 1;
                }
                result.sink += domain.sink_edges(v);
                changed = true;
            }
        }
    }
    return result;
}

double exact_green(const gasket::PrefractalGraph& ambient,
                   const std::vector<gasket::LatticeCoord>& region,
                   gasket::LatticeCoord source, gasket::LatticeCoord target) {
    const std::size_t n = region.size();
    std::map<std::uint64_t, std::size_t> index;
    for (std::size_t i = 0; i < n; ++i) index[gasket::pack(region[i])] = i;
    const auto src_it = index.find(gasket::pack(source));
    if (src_it == index.end()) throw std::invalid_argument("source outside region");
    const auto tgt_it = index.find(gasket::pack(target));
    if (tgt_it == index.end()) return 0.0;

    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        a[i][i] = 1.0;
        const std::uint32_t gi = ambient.index_of(region[i]);
        if (ambient.degree(gi) != 4) throw std::invalid_argument("region vertex not embedded");
        for (const std::uint32_t k : ambient.neighbors(gi)) {
            const auto it = index.find(gasket::pack(ambient.coord_of(k)));
            if (it != index.end()) a[i][it->second] -= 0.25;
        }
    }
    a[tgt_it->second][n] = 1.0;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        }
        std::swap(a[col], a[pivot]);
        if (std::abs(a[col][col]) < 1e-14) throw std::runtime_error("singular system");
        const double inv = 1.0 / a[col][col];
        for (std::size_t c = col; c <= n; ++c) a[col][c] *= inv;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0.0) continue;
            const double f = a[r][col];
            for (std::size_t c = col; c <= n; ++c) a[r][c] -= f * a[col][c];
        }
    }
    return a[src_it->second][n];
}

SweepRelaxResult relax_divisible(const gasket::Domain& domain, std::vector<double> sigma,
                                 double epsilon) {
    const std::size_t n = domain.size();
    SweepRelaxResult result;
    result.odometer.assign(n, 0.0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::uint32_t v = 0; v < n; ++v) {
            const double excess = sigma[v] - 1.0;
            if (excess <= epsilon) continue;
            sigma[v] = 1.0;
            result.odometer[v] += excess;
            const double share = excess / 4.0;
            for (const std::uint32_t w : domain.in_domain_neighbors(v)) {
                sigma[w] += share;
            }
            result.sink += share * domain.sink_edges(v);
            changed = true;
        }
    }
    result.final = std::move(sigma);
    return result;
}

}  // namespace oracle
