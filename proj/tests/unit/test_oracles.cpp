#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "floq/oracles.hpp"

using namespace floq;

namespace {

DelayCocycle constant_system(int m, double a0, double b0) {
    return DelayCocycle(GridSpec(m, 2.0), TorusFlow{},
                        CoeffSpec::harmonic(a0, 0.0, b0, 0.0));
}

} // namespace

TEST_SUITE("verify-oracles") {

TEST_CASE("characteristic root") {
    CHECK(characteristic_root(-1.0, 0.0) == doctest::Approx(-1.0));
    CHECK(characteristic_root(1.0, 0.0) == doctest::Approx(1.0));

    const double omega = characteristic_root(0.0, 1.0);
    CHECK(omega == doctest::Approx(0.5671432904).epsilon(1e-9));
    CHECK(std::abs(omega * std::exp(omega) - 1.0) <= 1e-11);

    // residual stays tight even when the naive bracket misses the root
    for (double a0 : {-10.0, -3.0, 0.25, 2.0}) {
        for (double b0 : {0.5, 1.0, 4.0}) {
            const double r = characteristic_root(a0, b0);
            CHECK(std::abs(r - a0 - b0 * std::exp(-r)) <= 1e-11);
        }
    }
    CHECK_THROWS_AS(characteristic_root(0.0, -1.0), std::invalid_argument);
}

TEST_CASE("two-probe growth rates") {
    SUBCASE("memoryless flow annihilates the second direction") {
        auto sys = constant_system(24, 0.0, 0.0);
        const auto b = benettin_exponents(sys, torus_point(0.0), 50);
        CHECK(std::isinf(b.second));
        CHECK(b.second < 0.0);
    }
    SUBCASE("first rate of the decoupled flow is the drift") {
        auto sys = constant_system(32, 0.7, 0.0);
        const auto b = benettin_exponents(sys, torus_point(0.0), 60);
        CHECK(b.first == doctest::Approx(0.7).epsilon(1e-8));
        CHECK(std::isinf(b.second));
    }
    SUBCASE("pure delay second rate cross-validates the deflation estimate") {
        auto sys = constant_system(48, 0.0, 1.0);
        const auto ws = build_workspace(sys, torus_point(0.0), 600, 1e-10, 200);
        const auto se = second_exponent(sys, ws, 3);
        const auto b = benettin_exponents(sys, torus_point(0.0), 600);
        CHECK(std::abs(se.lambda2 - b.second) <= 5e-2);
    }
}

TEST_CASE("identity battery passes on the pure delay system") {
    auto sys = constant_system(64, 0.0, 1.0);
    BatteryOptions opts;
    opts.seed = 11;
    const auto results = run_identity_battery(sys, torus_point(0.0), opts);
    CHECK(results.size() >= 10);
    for (const auto& r : results) {
        INFO(r.name, " residual=", r.residual, " tol=", r.tolerance);
        CHECK(r.pass);
        CHECK(r.tolerance > 0.0);
    }
    for (const auto& r : results)
        if (r.name == "cocycle-composition") CHECK(r.residual <= 1e-13);
}

TEST_CASE("identity battery passes on the quasi-periodic system") {
    auto sys = DelayCocycle(GridSpec(48, 2.0), TorusFlow{},
                            CoeffSpec::harmonic(0.1, 0.05, 1.0, 0.5));
    BatteryOptions opts;
    opts.seed = 5;
    const auto results = run_identity_battery(sys, torus_point(0.1), opts);
    CHECK(battery_passes(results));
}

TEST_CASE("identity battery passes on the telegraph driver") {
    GridSpec g(32, 2.0);
    TelegraphFlow tf;
    tf.tick = g.step();
    tf.seed = 42;
    auto sys = DelayCocycle(g, tf, CoeffSpec::tables({-0.5, 0.3}, {0.8, 1.2}));
    BatteryOptions opts;
    opts.seed = 7;
    const auto results = run_identity_battery(sys, telegraph_point(tf, 0), opts);
    for (const auto& r : results) {
        INFO(r.name, " residual=", r.residual);
        CHECK(r.pass);
    }
}

TEST_CASE("a tampered propagator is caught with a witness") {
    auto sys = constant_system(32, 0.0, 1.0);
    BatteryOptions opts;
    opts.seed = 11;
    opts.inject_fault = true;
    const auto results = run_identity_battery(sys, torus_point(0.0), opts);
    CHECK_FALSE(battery_passes(results));
    bool witnessed = false;
    for (const auto& r : results)
        if (!r.pass && !r.witness.empty()) witnessed = true;
    CHECK(witnessed);
}

} // TEST_SUITE
