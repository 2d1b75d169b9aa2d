#include <doctest.h>

#include <cmath>
#include <random>

#include "test_helpers.hpp"

using namespace floq;
using floq::testing::random_state;

namespace {

DelayCocycle constant_system(int m, double a0, double b0, double p = 2.0) {
    return DelayCocycle(GridSpec(m, p), TorusFlow{},
                        CoeffSpec::harmonic(a0, 0.0, b0, 0.0));
}

DelayCocycle quasi_periodic(int m) {
    return DelayCocycle(GridSpec(m, 2.0), TorusFlow{},
                        CoeffSpec::harmonic(0.1, 0.05, 1.0, 0.5));
}

} // namespace

TEST_SUITE("delay-cocycle") {

TEST_CASE("pure exponential step") {
    for (double a0 : {-1.0, 0.4, 1.0}) {
        auto sys = constant_system(64, a0, 0.0);
        const GridSpec& g = sys.grid();
        StateVector u = const_state(g, 1.0, 0.7); // tail is irrelevant when b = 0
        const StateVector out = sys.integrate_unit(torus_point(0.3), u);
        CHECK(out.head == doctest::Approx(std::exp(a0)).epsilon(1e-12));
        for (int j = 0; j <= g.m(); ++j)
            CHECK(out.tail[j] ==
                  doctest::Approx(std::exp(a0 * (1.0 + g.node(j)))).epsilon(1e-12));
    }
}

TEST_CASE("pure delay step integrates the segment") {
    auto sys = constant_system(64, 0.0, 1.0);
    const GridSpec& g = sys.grid();
    SUBCASE("zero head") {
        const StateVector out =
            sys.integrate_unit(torus_point(0.0), const_state(g, 0.0, 1.0));
        CHECK(out.head == doctest::Approx(1.0).epsilon(1e-13));
        for (int j = 0; j <= g.m(); ++j)
            CHECK(out.tail[j] == doctest::Approx(1.0 + g.node(j)).epsilon(1e-13));
    }
    SUBCASE("superposition with the head") {
        const StateVector out =
            sys.integrate_unit(torus_point(0.0), const_state(g, 1.0, 1.0));
        CHECK(out.head == doctest::Approx(2.0).epsilon(1e-13));
        for (int j = 0; j <= g.m(); ++j)
            CHECK(out.tail[j] == doctest::Approx(2.0 + g.node(j)).epsilon(1e-13));
    }
}

TEST_CASE("time zero is the identity and misaligned times are rejected") {
    auto sys = quasi_periodic(32);
    std::mt19937_64 rng(2);
    const StateVector u = random_state(sys.grid(), rng, false);
    const StateVector out = sys.apply(torus_point(0.2), 0.0, u);
    CHECK(out.head == u.head);
    CHECK(out.tail == u.tail);
    CHECK_THROWS_AS(sys.apply(torus_point(0.2), 0.015, u), std::invalid_argument);
    CHECK_THROWS_AS(sys.apply(torus_point(0.2), -1.0, u), std::invalid_argument);
}

TEST_CASE("composition at unit splits") {
    auto sys = quasi_periodic(32);
    const GridSpec& g = sys.grid();
    std::mt19937_64 rng(23);
    BasePoint w = torus_point(0.37);
    for (int i = 0; i < 20; ++i) {
        const StateVector u = random_state(g, rng, false);
        const StateVector direct = sys.apply(w, 2.0, u);
        const StateVector split =
            sys.apply(sys.shift(w, 1.0), 1.0, sys.apply(w, 1.0, u));
        CHECK(norm_x(sub(direct, split), g) <=
              1e-13 * std::max(1.0, norm_x(direct, g)));
    }
}

TEST_CASE("composition at arbitrary grid splits along evolved states") {
    auto sys = quasi_periodic(32);
    const GridSpec& g = sys.grid();
    const double h = g.step();
    std::mt19937_64 rng(29);
    std::uniform_int_distribution<int> ticks(1, 3 * g.m());
    BasePoint w = torus_point(0.61);
    for (int i = 0; i < 40; ++i) {
        // states visited by the flow are continuous across the head seam
        const StateVector u =
            sys.integrate_unit(sys.shift(w, -1.0), random_state(g, rng, false));
        const double s = h * ticks(rng);
        const double t = h * ticks(rng);
        const StateVector direct = sys.apply(w, s + t, u);
        const StateVector split = sys.apply(sys.shift(w, s), t, sys.apply(w, s, u));
        CHECK(norm_x(sub(direct, split), g) <=
              1e-13 * std::max(1.0, norm_x(direct, g)));
    }
}

TEST_CASE("everything dies when both coefficients vanish") {
    auto sys = constant_system(16, 0.0, 0.0);
    const GridSpec& g = sys.grid();
    const StateVector out =
        sys.apply(torus_point(0.0), 1.0, const_state(g, 0.0, 1.0));
    CHECK(norm_x(out, g) == doctest::Approx(0.0));
}

TEST_CASE("unit propagator matrix") {
    SUBCASE("a = b = 0 structure") {
        auto sys = constant_system(16, 0.0, 0.0);
        const auto up = sys.unit_matrix(torus_point(0.0));
        const int dim = sys.grid().dim();
        for (int i = 0; i < dim; ++i) CHECK(up.matrix(i, 0) == doctest::Approx(1.0));
        for (int j = 1; j < dim; ++j)
            for (int i = 0; i < dim; ++i) CHECK(up.matrix(i, j) == doctest::Approx(0.0));
    }
    SUBCASE("nonnegative entries whenever b >= 0") {
        auto sys = quasi_periodic(24);
        CHECK(sys.unit_matrix(torus_point(0.85)).matrix.min_entry() >= 0.0);
    }
    SUBCASE("matrix agrees with direct integration") {
        auto sys = quasi_periodic(24);
        const GridSpec& g = sys.grid();
        const BasePoint w = torus_point(0.44);
        const Matrix A = sys.unit_matrix(w).matrix;
        std::mt19937_64 rng(31);
        for (int i = 0; i < 50; ++i) {
            const StateVector u = random_state(g, rng, false);
            const auto via_matrix = from_coords(g, A.apply(to_coords(u)));
            const StateVector direct = sys.integrate_unit(w, u);
            CHECK(norm_x(sub(via_matrix, direct), g) <= 1e-13 * norm_x(u, g));
        }
    }
}

TEST_CASE("focusing bracket closed form for the pure delay system") {
    auto sys = constant_system(64, 0.0, 1.0);
    const GridSpec& g = sys.grid();
    const StateVector e = e_vector(g);
    const BasePoint w = torus_point(0.0);

    const auto fc = sys.focusing_constants(w, e);
    REQUIRE(fc.has_value());
    CHECK(fc->beta == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(fc->kappa == doctest::Approx(2.0).epsilon(1e-13));

    // z(1 + s) = 1 + s/2 + s^2/4 for s in [0, 1]
    const StateVector img = sys.apply(w, 2.0, e);
    CHECK(img.head == doctest::Approx(7.0 / 4.0).epsilon(1e-13));
    for (int j = 0; j <= g.m(); ++j) {
        const double s = 1.0 + g.node(j);
        CHECK(img.tail[j] ==
              doctest::Approx(1.0 + 0.5 * s + 0.25 * s * s).epsilon(1e-13));
    }
    // the bracket itself
    const auto ic = to_coords(img);
    const auto ec = to_coords(e);
    for (std::size_t c = 0; c < ic.size(); ++c) {
        CHECK(fc->beta * ec[c] <= ic[c] * (1.0 + 1e-12));
        CHECK(ic[c] <= fc->kappa * fc->beta * ec[c] * (1.0 + 1e-12));
    }
}

TEST_CASE("kernel branch") {
    auto sys = constant_system(32, 0.0, 0.0);
    const GridSpec& g = sys.grid();
    const auto fc =
        sys.focusing_constants(torus_point(0.0), const_state(g, 0.0, 1.0));
    CHECK_FALSE(fc.has_value());
    CHECK_THROWS_AS(
        sys.focusing_constants(torus_point(0.0), const_state(g, -1.0, 1.0)),
        std::invalid_argument);
}

TEST_CASE("bracket width is at least one") {
    auto qp = quasi_periodic(32);
    for (int i = 0; i < 20; ++i)
        CHECK(qp.kappa(torus_point(i / 20.0)) >= 1.0);
    auto degenerate = constant_system(32, -1.0, 0.0);
    CHECK(degenerate.kappa(torus_point(0.0)) >= 1.0);
}

TEST_CASE("bracket holds with kernel-or-sandwich over seeded cone vectors") {
    auto sys = quasi_periodic(48);
    const GridSpec& g = sys.grid();
    const auto ec = to_coords(e_vector(g));
    std::mt19937_64 rng(41);
    for (int i = 0; i < 100; ++i) {
        const BasePoint w = torus_point(i / 100.0);
        const StateVector u = random_state(g, rng, true);
        const auto fc = sys.focusing_constants(w, u);
        REQUIRE(fc.has_value()); // b > 0 here, nothing is annihilated
        const auto ic = to_coords(sys.apply(w, 2.0, u));
        for (std::size_t c = 0; c < ic.size(); ++c) {
            CHECK(fc->beta * ec[c] <= ic[c] * (1.0 + 1e-12) + 1e-300);
            CHECK(ic[c] <= fc->kappa * fc->beta * ec[c] * (1.0 + 1e-12) + 1e-300);
        }
    }
}

TEST_CASE("growth bound") {
    CHECK(constant_system(32, 0.0, 0.0).growth_bound(torus_point(0.1)) ==
          doctest::Approx(3.0).epsilon(1e-12));
    CHECK(constant_system(32, 1.0, 0.0).growth_bound(torus_point(0.1)) ==
          doctest::Approx(3.0 * std::exp(1.0)).epsilon(1e-12));

    auto sys = quasi_periodic(32);
    const GridSpec& g = sys.grid();
    std::mt19937_64 rng(43);
    std::uniform_int_distribution<int> ticks(0, g.m());
    const BasePoint w = torus_point(0.77);
    const double bound = sys.growth_bound(w);
    for (int i = 0; i < 100; ++i) {
        const StateVector u = random_state(g, rng, false);
        const double t = g.step() * ticks(rng);
        CHECK(norm_x(sys.apply(w, t, u), g) <= bound * norm_x(u, g) * (1.0 + 1e-12));
    }
}

TEST_CASE("growth bound away from the self-dual exponent") {
    DelayCocycle sys(GridSpec(32, 3.0), TorusFlow{},
                     CoeffSpec::harmonic(0.1, 0.05, 1.0, 0.5));
    const GridSpec& g = sys.grid();
    std::mt19937_64 rng(83);
    std::uniform_int_distribution<int> ticks(0, g.m());
    const BasePoint w = torus_point(0.21);
    const double bound = sys.growth_bound(w);
    for (int i = 0; i < 50; ++i) {
        const StateVector u = random_state(g, rng, false);
        const double t = g.step() * ticks(rng);
        CHECK(norm_x(sys.apply(w, t, u), g) <= bound * norm_x(u, g) * (1.0 + 1e-12));
    }
}

TEST_CASE("cone order is preserved") {
    auto sys = quasi_periodic(32);
    const GridSpec& g = sys.grid();
    std::mt19937_64 rng(47);
    for (int i = 0; i < 30; ++i) {
        const StateVector lo = random_state(g, rng, true);
        const StateVector hi = add(lo, random_state(g, rng, true));
        const auto ilo = to_coords(sys.apply(torus_point(0.3), 2.0, lo));
        const auto ihi = to_coords(sys.apply(torus_point(0.3), 2.0, hi));
        for (std::size_t c = 0; c < ilo.size(); ++c) CHECK(ilo[c] <= ihi[c] + 1e-12);
    }
}

TEST_CASE("kernel-or-component dichotomy past two units") {
    const GridSpec g(32, 2.0);
    const StateVector e = e_vector(g);
    SUBCASE("positive delay coefficient lands in the component of e") {
        auto sys = quasi_periodic(32);
        std::mt19937_64 rng(53);
        for (int i = 0; i < 20; ++i) {
            StateVector u = random_state(g, rng, true);
            if (i % 3 == 0) u.head = 0.0;
            for (double t : {2.0, 2.0 + g.step(), 3.0, 4.0}) {
                const StateVector img = sys.apply(torus_point(0.15), t, u);
                CHECK(in_cone(img));
                CHECK(comparable(img, e));
            }
        }
    }
    SUBCASE("annihilated vectors stay annihilated") {
        auto sys = constant_system(32, 0.5, 0.0);
        const StateVector u = const_state(g, 0.0, 1.0); // kernel: no head, no feedback
        for (double t : {2.0, 2.0 + g.step(), 3.0, 4.0})
            CHECK(norm_x(sys.apply(torus_point(0.0), t, u), g) == 0.0);
    }
}

TEST_CASE("constant coefficients reproduce closed forms on the grid") {
    // cases whose variation-of-constants integrals the quadrature captures
    // exactly: pure exponential flow, and pure delay with affine segments
    SUBCASE("exponential flow at m = 64") {
        auto sys = constant_system(64, 0.8, 0.0);
        const GridSpec& g = sys.grid();
        const StateVector out =
            sys.apply(torus_point(0.0), 3.0, const_state(g, 1.0, 0.0));
        CHECK(out.head == doctest::Approx(std::exp(2.4)).epsilon(1e-10));
    }
    SUBCASE("pure delay with affine history at m = 64") {
        auto sys = constant_system(64, 0.0, 2.0);
        const GridSpec& g = sys.grid();
        StateVector u = const_state(g, 1.0, 0.0);
        for (int j = 0; j <= g.m(); ++j) u.tail[j] = 1.0 + g.node(j); // u2(s) = 1 + s
        const StateVector out = sys.integrate_unit(torus_point(0.0), u);
        // z(t) = 1 + 2 (t^2/2) = 1 + t^2 exactly
        CHECK(out.head == doctest::Approx(2.0).epsilon(1e-12));
        for (int j = 0; j <= g.m(); ++j) {
            const double t = 1.0 + g.node(j);
            CHECK(out.tail[j] == doctest::Approx(1.0 + t * t).epsilon(1e-12));
        }
    }
}

TEST_CASE("trajectory record heads match the returned state") {
    auto sys = quasi_periodic(16);
    const GridSpec& g = sys.grid();
    std::mt19937_64 rng(59);
    const StateVector u = random_state(g, rng, true);
    const auto rec = sys.trajectory(torus_point(0.05), 3.0, u);
    REQUIRE(rec.times.size() == static_cast<std::size_t>(3 * g.m() + 1));
    const StateVector out = sys.apply(torus_point(0.05), 3.0, u);
    CHECK(rec.heads.back() == doctest::Approx(out.head));
    CHECK(rec.heads.front() == doctest::Approx(u.head));
}

} // TEST_SUITE
