#include <doctest.h>

#include <cmath>
#include <random>

#include "test_helpers.hpp"

using namespace floq;
using floq::testing::random_state;
using floq::testing::unit_state;

TEST_SUITE("state-space") {

TEST_CASE("grid weights are positive and sum to the interval length") {
    for (int m : {8, 17, 64}) {
        GridSpec g(m, 2.0);
        double sum = 0.0;
        for (int j = 0; j <= m; ++j) {
            CHECK(g.weight(j) > 0.0);
            sum += g.weight(j);
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(g.node(0) == -1.0);
        CHECK(g.node(m) == 0.0);
    }
}

TEST_CASE("conjugate exponent") {
    CHECK(GridSpec(8, 2.0).q() == doctest::Approx(2.0));
    CHECK(GridSpec(8, 3.0).q() == doctest::Approx(1.5));
    CHECK(std::isinf(GridSpec(8, 1.0).q()));
    CHECK_THROWS_AS(GridSpec(0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(GridSpec(8, 0.5), std::invalid_argument);
}

TEST_CASE("norm examples") {
    GridSpec g2(16, 2.0);
    CHECK(norm_x(const_state(g2, 1.0, 0.0), g2) == doctest::Approx(1.0));
    CHECK(norm_x(const_state(g2, 0.0, 1.0), g2) == doctest::Approx(1.0));
    GridSpec g1(16, 1.0);
    CHECK(norm_x(const_state(g1, 1.0, 2.0), g1) == doctest::Approx(3.0));
}

TEST_CASE("e is a unit vector for every exponent") {
    for (double p : {1.0, 1.5, 2.0, 3.0, 7.0}) {
        GridSpec g(32, p);
        CHECK(norm_x(e_vector(g), g) == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("cone membership") {
    GridSpec g(8, 2.0);
    CHECK(in_cone(const_state(g, 1.0, 1.0)));
    CHECK_FALSE(in_cone(const_state(g, -1.0, 1.0)));
    CHECK(in_cone(zero_state(g)));
    // entries inside the zero tolerance count as zero
    StateVector u = const_state(g, 1.0, 1.0);
    u.tail[3] = -1e-14;
    CHECK(in_cone(u));
}

TEST_CASE("gauge identities") {
    GridSpec g(8, 2.0);
    std::mt19937_64 rng(11);
    const StateVector u = random_state(g, rng, true);

    auto id = gauge(u, u);
    CHECK(id.m_ratio == doctest::Approx(1.0));
    CHECK(id.M_ratio == doctest::Approx(1.0));
    CHECK(id.dist == doctest::Approx(0.0));

    auto sc = gauge(scaled(u, 2.0), u);
    CHECK(sc.m_ratio == doctest::Approx(2.0));
    CHECK(sc.M_ratio == doctest::Approx(2.0));
    CHECK(sc.dist == doctest::Approx(0.0));
}

TEST_CASE("gauge two-ratio example") {
    GridSpec g(8, 2.0);
    StateVector u = const_state(g, 1.0, 1.0);
    u.tail[4] = 2.0; // ratios {1, 2} against the all-ones vector
    const StateVector ones = const_state(g, 1.0, 1.0);
    auto pg = gauge(u, ones);
    CHECK(pg.m_ratio == doctest::Approx(1.0));
    CHECK(pg.M_ratio == doctest::Approx(2.0));
    CHECK(pg.dist == doctest::Approx(std::log(2.0)));
    CHECK(pg.osc == doctest::Approx(1.0));
}

TEST_CASE("gauge rejects the zero denominator and reports support mismatch") {
    GridSpec g(8, 2.0);
    CHECK_THROWS_AS(gauge(const_state(g, 1.0, 1.0), zero_state(g)), std::invalid_argument);

    StateVector headless = const_state(g, 0.0, 1.0);
    StateVector full = const_state(g, 1.0, 1.0);
    CHECK(std::isinf(gauge(full, headless).dist));
    CHECK(std::isinf(gauge(full, headless).M_ratio));
    CHECK(std::isinf(gauge(headless, full).dist));
    CHECK(gauge(headless, full).m_ratio == doctest::Approx(0.0));
}

TEST_CASE("comparability follows supports") {
    GridSpec g(8, 2.0);
    std::mt19937_64 rng(3);
    const StateVector u = random_state(g, rng, true);
    const StateVector v = random_state(g, rng, true);
    CHECK(comparable(u, v));
    CHECK(comparable(u, scaled(u, 3.0)));

    StateVector headless = u;
    headless.head = 0.0;
    CHECK_FALSE(comparable(headless, v));
    CHECK_THROWS_AS(comparable(zero_state(g), v), std::invalid_argument);
}

TEST_CASE("projective distance is a pseudometric on positive vectors") {
    GridSpec g(16, 2.0);
    std::mt19937_64 rng(17);
    for (int i = 0; i < 50; ++i) {
        const StateVector u = random_state(g, rng, true);
        const StateVector v = random_state(g, rng, true);
        const StateVector w = random_state(g, rng, true);
        const double duv = proj_dist(u, v);
        CHECK(duv == doctest::Approx(proj_dist(v, u)).epsilon(1e-12));
        CHECK(proj_dist(u, scaled(u, 0.5 + i * 0.1)) == doctest::Approx(0.0));
        CHECK(proj_dist(u, w) <= duv + proj_dist(v, w) + 1e-12);
    }
}

TEST_CASE("norm bound by the projective distance") {
    GridSpec g(16, 2.0);
    SUBCASE("coincident vectors") {
        const StateVector u = unit_state(const_state(g, 1.0, 1.0), g);
        auto [lhs, rhs] = projdist_norm_bound(u, u, g);
        CHECK(lhs == doctest::Approx(0.0));
        CHECK(rhs == doctest::Approx(0.0));
    }
    SUBCASE("distance ln 2 gives bound 3") {
        // ratios {1, 2} survive the separate renormalizations, so d = ln 2
        StateVector u = const_state(g, 1.0, 1.0);
        u.tail[8] = 2.0;
        const StateVector uu = unit_state(u, g);
        const StateVector vv = unit_state(const_state(g, 1.0, 1.0), g);
        auto [lhs, rhs] = projdist_norm_bound(uu, vv, g);
        CHECK(rhs == doctest::Approx(3.0).epsilon(1e-12));
        CHECK(lhs <= rhs);
    }
    SUBCASE("200 random comparable unit pairs") {
        std::mt19937_64 rng(29);
        for (int i = 0; i < 200; ++i) {
            const StateVector u = unit_state(random_state(g, rng, true), g);
            const StateVector v = unit_state(random_state(g, rng, true), g);
            auto [lhs, rhs] = projdist_norm_bound(u, v, g);
            CHECK(lhs <= rhs + 1e-12);
        }
    }
    SUBCASE("rejects non-unit input") {
        const StateVector u = const_state(g, 1.0, 1.0);
        CHECK_THROWS_AS(projdist_norm_bound(u, u, g), std::invalid_argument);
    }
}

TEST_CASE("norm is monotone on the cone") {
    GridSpec g(16, 2.0);
    std::mt19937_64 rng(31);
    for (double p : {1.5, 2.0, 4.0}) {
        GridSpec gp(16, p);
        for (int i = 0; i < 30; ++i) {
            const StateVector lo = random_state(gp, rng, true);
            const StateVector hi = add(lo, random_state(gp, rng, true));
            CHECK(norm_x(lo, gp) <= norm_x(hi, gp) + 1e-14);
        }
    }
}

TEST_CASE("gauge ratios bracket the vector componentwise") {
    GridSpec g(16, 2.0);
    std::mt19937_64 rng(37);
    for (int i = 0; i < 50; ++i) {
        const StateVector u = random_state(g, rng, true);
        const StateVector v = random_state(g, rng, true);
        const auto pg = gauge(u, v);
        const auto cu = to_coords(u);
        const auto cv = to_coords(v);
        for (std::size_t c = 0; c < cu.size(); ++c) {
            CHECK(pg.m_ratio * cv[c] <= cu[c] + 1e-12);
            CHECK(cu[c] <= pg.M_ratio * cv[c] + 1e-12);
        }
    }
}

} // TEST_SUITE
