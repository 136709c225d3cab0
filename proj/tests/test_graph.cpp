#include <doctest.h>

#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>

#include "gasket/graph.hpp"
#include "oracles.hpp"

using namespace gasket;

namespace {

std::int64_t pow3(int e) {
    std::int64_t r = 1;
    while (e-- > 0) r *= 3;
    return r;
}

}  // namespace

TEST_SUITE("graph") {

TEST_CASE("level 0 plus is a single triangle") {
    const PrefractalGraph g = PrefractalGraph::build(0, Half::Plus);
    CHECK(g.vertex_count() == 3);
    CHECK(g.edge_count() == 3);
    const std::vector<LatticeCoord> expected = {{0, 0}, {1, 0}, {0, 1}};
    for (const LatticeCoord v : expected) CHECK(g.contains(v));
}

TEST_CASE("counts match closed forms and the enumeration oracle for n <= 8") {
    for (int n = 0; n <= 8; ++n) {
        const PrefractalGraph g = PrefractalGraph::build(n, Half::Plus);
        CHECK(static_cast<std::int64_t>(g.vertex_count()) == (pow3(n + 1) + 3) / 2);
        CHECK(static_cast<std::int64_t>(g.edge_count()) == pow3(n + 1));
        const PrefractalGraph both = PrefractalGraph::build(n, Half::Both);
        CHECK(static_cast<std::int64_t>(both.vertex_count()) == pow3(n + 1) + 2);
        CHECK(static_cast<std::int64_t>(both.edge_count()) == 2 * pow3(n + 1));

        const oracle::EnumGraph reference = oracle::enum_build(n, Half::Plus);
        CHECK(reference.vertices.size() == g.vertex_count());
        CHECK(reference.edges.size() == g.edge_count());
    }
}

TEST_CASE("vertex and edge sets agree with the enumeration oracle") {
    for (const Half half : {Half::Plus, Half::Minus, Half::Both}) {
        for (int n = 0; n <= 4; ++n) {
            const PrefractalGraph g = PrefractalGraph::build(n, half);
            const oracle::EnumGraph reference = oracle::enum_build(n, half);
            std::set<oracle::XY> verts;
            for (const LatticeCoord v : g.vertices()) verts.insert(oracle::to_doubled(v));
            CHECK(verts == reference.vertices);
            std::set<oracle::Edge> edges;
            for (std::uint32_t i = 0; i < g.vertex_count(); ++i) {
                for (const std::uint32_t k : g.neighbors(i)) {
                    const oracle::XY a = oracle::to_doubled(g.coord_of(i));
                    const oracle::XY b = oracle::to_doubled(g.coord_of(k));
                    edges.insert(a < b ? oracle::Edge{a, b} : oracle::Edge{b, a});
                }
            }
            CHECK(edges == reference.edges);
        }
    }
}

TEST_CASE("build(2, Both) has 29 vertices sharing only the origin") {
    const PrefractalGraph g = PrefractalGraph::build(2, Half::Both);
    CHECK(g.vertex_count() == 29);
    std::size_t on_axis = 0;
    for (const LatticeCoord v : g.vertices()) {
        if (reflect(v) == v) ++on_axis;
    }
    CHECK(on_axis == 1);  // only o is its own mirror image
}

TEST_CASE("cyclic neighbour order") {
    const PrefractalGraph both = PrefractalGraph::build(3, Half::Both);
    CHECK(both.cyclic_neighbors({0, 0}) ==
          std::vector<LatticeCoord>{{1, 0}, {0, 1}, {-1, 1}, {-1, 0}});
    CHECK(both.cyclic_neighbors({4, 0}) ==
          std::vector<LatticeCoord>{{5, 0}, {4, 1}, {3, 1}, {3, 0}});

    const PrefractalGraph plus2 = PrefractalGraph::build(2, Half::Plus);
    CHECK(plus2.cyclic_neighbors({4, 0}).size() == 2);  // prefractal corner
    CHECK_THROWS_AS(plus2.cyclic_neighbors({-1, 0}), unknown_vertex_error);
}

TEST_CASE("degree census") {
    for (int n = 1; n <= 4; ++n) {
        const PrefractalGraph plus = PrefractalGraph::build(n, Half::Plus);
        int deg2 = 0;
        for (std::uint32_t i = 0; i < plus.vertex_count(); ++i) {
            const int d = plus.degree(i);
            CHECK((d == 2 || d == 4));
            if (d == 2) ++deg2;
        }
        CHECK(deg2 == 3);

        // embedded view: every vertex of SG_n has degree 4 inside SG_{n+1}
        const PrefractalGraph bigger = PrefractalGraph::build(n + 1, Half::Both);
        const PrefractalGraph level_n = PrefractalGraph::build(n, Half::Both);
        for (const LatticeCoord v : level_n.vertices()) {
            CHECK(bigger.degree(bigger.index_of(v)) == 4);
        }
    }
}

TEST_CASE("embedded adjacency is stable under growing the level") {
    const PrefractalGraph small = PrefractalGraph::build(2, Half::Both);
    const PrefractalGraph big = PrefractalGraph::build(4, Half::Both);
    const auto corner_list = corners(2);
    for (const LatticeCoord v : small.vertices()) {
        if (std::find(corner_list.begin(), corner_list.end(), v) != corner_list.end()) {
            continue;  // corners gain their two outward edges
        }
        CHECK(small.cyclic_neighbors(v) == big.cyclic_neighbors(v));
    }
}

TEST_CASE("reflection maps plus onto minus edge-for-edge") {
    const PrefractalGraph plus = PrefractalGraph::build(3, Half::Plus);
    const PrefractalGraph minus = PrefractalGraph::build(3, Half::Minus);
    CHECK(plus.vertex_count() == minus.vertex_count());
    CHECK(plus.edge_count() == minus.edge_count());
    for (const LatticeCoord v : plus.vertices()) {
        const LatticeCoord w = reflect(v);
        REQUIRE(minus.contains(w));
        std::set<std::uint64_t> expected;
        for (const LatticeCoord nbr : plus.cyclic_neighbors(v)) {
            expected.insert(pack(reflect(nbr)));
        }
        std::set<std::uint64_t> got;
        for (const LatticeCoord nbr : minus.cyclic_neighbors(w)) got.insert(pack(nbr));
        CHECK(expected == got);
    }
}

TEST_CASE("corner coordinates") {
    const auto c2 = corners(2);
    CHECK(c2[0] == LatticeCoord{4, 0});
    CHECK(c2[1] == LatticeCoord{0, 4});
    CHECK(c2[2] == LatticeCoord{-4, 4});
    CHECK(c2[3] == LatticeCoord{-4, 0});
    const auto c1 = corners(1);
    CHECK(c1[0] == LatticeCoord{2, 0});
    CHECK(c1[1] == LatticeCoord{0, 2});
    CHECK(c1[2] == LatticeCoord{-2, 2});
    CHECK(c1[3] == LatticeCoord{-2, 0});
    const auto [x, y] = to_euclidean(c2[1]);
    CHECK(x == doctest::Approx(2.0));
    CHECK(y == doctest::Approx(2.0 * 1.7320508075688772));
    CHECK_THROWS_AS(corners(0), config_error);

    for (int n = 1; n <= 8; ++n) {
        const auto c = corners(n);
        const std::int32_t m = std::int32_t{1} << n;
        CHECK(c[0] == LatticeCoord{m, 0});
        CHECK(c[1] == LatticeCoord{0, m});
        CHECK(c[2] == LatticeCoord{-m, m});
        CHECK(c[3] == LatticeCoord{-m, 0});
    }

    const PrefractalGraph plus = PrefractalGraph::build(2, Half::Plus);
    CHECK(plus.corner_coords() == std::vector<LatticeCoord>{{4, 0}, {0, 4}});
    const PrefractalGraph minus = PrefractalGraph::build(2, Half::Minus);
    CHECK(minus.corner_coords() == std::vector<LatticeCoord>{{-4, 4}, {-4, 0}});
}

TEST_CASE("cut sets") {
    const std::vector<LatticeCoord> s2 = cut_set(2);
    CHECK(s2.size() == 25);  // 29 - 4 corners
    CHECK(std::binary_search(s2.begin(), s2.end(), LatticeCoord{0, 0}));
    for (const LatticeCoord c : corners(2)) {
        CHECK(!std::binary_search(s2.begin(), s2.end(), c));
    }

    // nesting S_1 subset S_2 subset S_3
    const std::vector<LatticeCoord> s1 = cut_set(1);
    const std::vector<LatticeCoord> s3 = cut_set(3);
    CHECK(std::includes(s2.begin(), s2.end(), s1.begin(), s1.end()));
    CHECK(std::includes(s3.begin(), s3.end(), s2.begin(), s2.end()));
}

TEST_CASE("outer boundaries") {
    const PrefractalGraph ambient = PrefractalGraph::build(3, Half::Both);

    const std::vector<LatticeCoord> just_o = {{0, 0}};
    CHECK(outer_boundary(ambient, just_o) ==
          std::vector<LatticeCoord>{{-1, 0}, {1, 0}, {-1, 1}, {0, 1}});

    const std::vector<LatticeCoord> s2 = cut_set(2);
    const auto boundary = outer_boundary(ambient, s2);
    const auto expected = corners(2);
    REQUIRE(boundary.size() == 4);
    for (const LatticeCoord c : expected) {
        CHECK(std::find(boundary.begin(), boundary.end(), c) != boundary.end());
    }

    // a whole finite graph has empty outer boundary within itself
    const PrefractalGraph small = PrefractalGraph::build(1, Half::Both);
    CHECK(outer_boundary(small, small.vertices()).empty());
}

TEST_CASE("json export is deterministic and well formed") {
    const PrefractalGraph g = PrefractalGraph::build(2, Half::Plus);
    const std::string a = g.to_json();
    const std::string b = PrefractalGraph::build(2, Half::Plus).to_json();
    CHECK(a == b);

    const nlohmann::json j = nlohmann::json::parse(a);
    CHECK(j.at("level") == 2);
    CHECK(j.at("half") == "plus");
    CHECK(j.at("vertices").size() == 15);
    CHECK(j.at("edges").size() == 27);
    // vertices sorted by (b, a)
    auto prev = std::pair{-1, -1000};
    for (const auto& v : j.at("vertices")) {
        const auto cur = std::pair{v[1].get<int>(), v[0].get<int>()};
        CHECK(cur > prev);
        prev = cur;
    }
}

TEST_CASE("capacity guard") {
    CHECK_THROWS_AS(PrefractalGraph::build(kDefaultMaxLevel + 1, Half::Plus),
                    capacity_error);
    CHECK_THROWS_AS(PrefractalGraph::build(9, Half::Plus, 8), capacity_error);
    CHECK_THROWS_AS(PrefractalGraph::build(-1, Half::Plus), config_error);
}

}  // TEST_SUITE
