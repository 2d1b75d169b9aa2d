#include <doctest.h>

#include <cmath>
#include <random>

#include "test_helpers.hpp"

using namespace floq;
using floq::testing::random_dual;
using floq::testing::random_state;

namespace {

DelayCocycle quasi_periodic(int m, double p = 2.0) {
    return DelayCocycle(GridSpec(m, p), TorusFlow{},
                        CoeffSpec::harmonic(0.1, 0.05, 1.0, 0.5));
}

} // namespace

TEST_SUITE("dual-cocycle") {

TEST_CASE("reference pair is normalized for every exponent") {
    for (double p : {1.5, 2.0, 3.0}) {
        GridSpec g(32, p);
        CHECK(pairing(e_vector(g), e_star(g), g) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(dual_norm(e_star(g), g) == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("pairing basics") {
    GridSpec g(16, 2.0);
    std::mt19937_64 rng(3);
    CHECK(pairing(zero_state(g), random_dual(g, rng), g) == doctest::Approx(0.0));
    for (int i = 0; i < 100; ++i)
        CHECK(pairing(random_state(g, rng, true), random_dual(g, rng), g) >= 0.0);
    GridSpec other(17, 2.0);
    CHECK_THROWS_AS(pairing(zero_state(other), e_star(g), g), std::invalid_argument);
}

TEST_CASE("pairing is bounded by the norm product") {
    GridSpec g(16, 2.0);
    std::mt19937_64 rng(5);
    for (int i = 0; i < 100; ++i) {
        const StateVector u = random_state(g, rng, false);
        const DualVector v = random_dual(g, rng, false);
        CHECK(std::abs(pairing(u, v, g)) <=
              norm_x(u, g) * dual_norm(v, g) * (1.0 + 1e-12));
    }
}

TEST_CASE("dual step at time zero is the identity") {
    auto sys = quasi_periodic(16);
    const GridSpec& g = sys.grid();
    std::mt19937_64 rng(7);
    const DualVector v = random_dual(g, rng);
    const DualVector out = dual_apply(sys, torus_point(0.2), 0.0, v);
    CHECK(out.head == v.head);
    CHECK(out.tail == v.tail);
}

TEST_CASE("adjoint identity across grid times") {
    auto sys = quasi_periodic(32);
    const GridSpec& g = sys.grid();
    const double h = g.step();
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> ticks(1, 10 * g.m());
    const BasePoint w = torus_point(0.3);
    for (int i = 0; i < 100; ++i) {
        const StateVector u = random_state(g, rng, false);
        const DualVector v = random_dual(g, rng, false);
        const double t = h * ticks(rng);
        const double lhs = pairing(sys.apply(sys.shift(w, -t), t, u), v, g);
        const double rhs = pairing(u, dual_apply(sys, w, t, v), g);
        CHECK(std::abs(lhs - rhs) <=
              1e-12 * std::max(1.0, norm_x(u, g) * dual_norm(v, g)));
    }
}

TEST_CASE("adjoint identity away from the self-dual exponent") {
    auto sys = quasi_periodic(24, 3.0);
    const GridSpec& g = sys.grid();
    std::mt19937_64 rng(13);
    const BasePoint w = torus_point(0.9);
    for (int i = 0; i < 30; ++i) {
        const StateVector u = random_state(g, rng, false);
        const DualVector v = random_dual(g, rng, false);
        const double t = 1.0 + (i % 3);
        const double lhs = pairing(sys.apply(sys.shift(w, -t), t, u), v, g);
        const double rhs = pairing(u, dual_apply(sys, w, t, v), g);
        CHECK(std::abs(lhs - rhs) <=
              1e-12 * std::max(1.0, norm_x(u, g) * dual_norm(v, g)));
    }
}

TEST_CASE("dual cocycle law for grid-aligned compositions") {
    // the second leg continues the factor chain of the first, so the law is
    // exact when the split point sits on a unit boundary of the deeper leg
    auto sys = quasi_periodic(24);
    const GridSpec& g = sys.grid();
    const double h = g.step();
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> ticks(1, 2 * g.m());
    std::uniform_int_distribution<int> units(1, 4);
    const BasePoint w = torus_point(0.52);
    for (int i = 0; i < 30; ++i) {
        const DualVector v = random_dual(g, rng);
        const double t = h * ticks(rng);
        const double s = static_cast<double>(units(rng));
        const DualVector direct = dual_apply(sys, w, t + s, v);
        const DualVector split =
            dual_apply(sys, sys.shift(w, -t), s, dual_apply(sys, w, t, v));
        double diff = std::abs(direct.head - split.head);
        for (int j = 0; j <= g.m(); ++j)
            diff = std::max(diff, std::abs(direct.tail[j] - split.tail[j]));
        CHECK(diff <= 1e-12 * std::max(1.0, dual_max_abs(direct)));
    }
}

TEST_CASE("dual cone is preserved and nothing positive is annihilated") {
    auto sys = quasi_periodic(24);
    const GridSpec& g = sys.grid();
    std::mt19937_64 rng(19);
    for (int i = 0; i < 50; ++i) {
        const DualVector v = random_dual(g, rng);
        const double t = 1.0 + (i % 8);
        const DualVector out = dual_apply(sys, torus_point(0.1), t, v);
        CHECK(in_dual_cone(out));
        CHECK(dual_norm(out, g) > kZeroTol * dual_norm(v, g));
    }
}

TEST_CASE("dual bracket constants") {
    auto sys = DelayCocycle(GridSpec(32, 2.0), TorusFlow{},
                            CoeffSpec::harmonic(0.0, 0.0, 1.0, 0.0));
    const GridSpec& g = sys.grid();
    const BasePoint w = torus_point(0.0);

    SUBCASE("width at least one and the reference value") {
        const auto df = dual_focusing_constants(sys, w, e_star(g));
        CHECK(df.kappa_star >= 1.0);
        // <e, e*> = 1, so beta* is the reciprocal bracket width two units back
        CHECK(df.beta_star ==
              doctest::Approx(1.0 / sys.kappa(sys.shift(w, -2.0))).epsilon(1e-13));
        CHECK(df.kappa_star ==
              doctest::Approx(std::pow(sys.kappa(sys.shift(w, -2.0)), 2)).epsilon(1e-13));
    }

    SUBCASE("bracket holds componentwise for dual cone vectors") {
        const DualVector ref = dual_apply(sys, w, 2.0, e_star(g));
        std::mt19937_64 rng(23);
        for (int i = 0; i < 50; ++i) {
            const DualVector v = random_dual(g, rng);
            const auto df = dual_focusing_constants(sys, w, v);
            const DualVector img = dual_apply(sys, w, 2.0, v);
            auto coords = [&](const DualVector& d, int c) {
                return c == 0 ? d.head : d.tail[c - 1];
            };
            for (int c = 0; c < g.dim(); ++c) {
                const double lo = df.beta_star * coords(ref, c);
                const double hi = df.kappa_star * df.beta_star * coords(ref, c);
                CHECK(lo <= coords(img, c) * (1.0 + 1e-10) + 1e-300);
                CHECK(coords(img, c) <= hi * (1.0 + 1e-10) + 1e-300);
            }
        }
    }

    SUBCASE("rejects zero and signed vectors") {
        CHECK_THROWS_AS(dual_focusing_constants(sys, w, zero_dual(g)),
                        std::invalid_argument);
        DualVector bad = e_star(g);
        bad.head = -1.0;
        CHECK_THROWS_AS(dual_focusing_constants(sys, w, bad), std::invalid_argument);
    }
}

} // TEST_SUITE
