#include <doctest.h>

#include <cmath>

#include "gasket/lattice.hpp"
#include "gasket/rng.hpp"

using namespace gasket;

TEST_SUITE("lattice") {

TEST_CASE("euclidean embedding of the basis") {
    CHECK(to_euclidean({0, 0}) == std::pair{0.0, 0.0});
    CHECK(to_euclidean({1, 0}) == std::pair{1.0, 0.0});
    const auto [x, y] = to_euclidean({0, 1});
    CHECK(x == doctest::Approx(0.5));
    CHECK(y == doctest::Approx(0.8660254037844386));
}

TEST_CASE("direction steps are listed by ascending angle") {
    double prev = -1.0;
    for (int i = 0; i < kNumDirections; ++i) {
        const auto [x, y] = to_euclidean(kDirectionStep[static_cast<std::size_t>(i)]);
        double angle = std::atan2(y, x);
        if (angle < 0) angle += 2 * M_PI;
        CHECK(angle > prev);
        CHECK(std::hypot(x, y) == doctest::Approx(1.0));
        prev = angle;
    }
}

TEST_CASE("direction_between inverts step") {
    const LatticeCoord v{3, -2};
    for (int i = 0; i < kNumDirections; ++i) {
        CHECK(direction_between(v, step(v, i)) == i);
    }
    CHECK(direction_between(v, {3, 0}) == -1);
    CHECK(direction_between(v, v) == -1);
}

TEST_CASE("reflection is an involution matching the euclidean mirror") {
    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        const LatticeCoord v{static_cast<std::int32_t>(rng.next_below(2001)) - 1000,
                             static_cast<std::int32_t>(rng.next_below(2001)) - 1000};
        const LatticeCoord r = reflect(v);
        CHECK(reflect(r) == v);
        const auto [x, y] = to_euclidean(v);
        const auto [rx, ry] = to_euclidean(r);
        CHECK(rx == doctest::Approx(-x));
        CHECK(ry == doctest::Approx(y));
    }
}

TEST_CASE("pack/unpack round trip") {
    for (const LatticeCoord v :
         {LatticeCoord{0, 0}, LatticeCoord{-5, 9}, LatticeCoord{1 << 20, -(1 << 20)}}) {
        CHECK(unpack(pack(v)) == v);
    }
}

}  // TEST_SUITE
