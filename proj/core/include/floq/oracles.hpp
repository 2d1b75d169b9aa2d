#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "floq/floquet_bundle.hpp"

namespace floq {

/// Unique real root of lambda = a0 + b0 exp(-lambda) for b0 >= 0, located by
/// bracketing bisection; the bracket is widened upward until it straddles the
/// root. Returns a0 when b0 = 0.
double characteristic_root(double a0, double b0);

/// Two-probe power iteration through the unit propagator matrices with
/// per-step Gram-Schmidt reorthogonalization in the quadrature inner product.
/// `second` is -inf when the second direction is annihilated.
struct BenettinResult {
    double first = 0.0;
    double second = 0.0;
};

BenettinResult benettin_exponents(const DelayCocycle& sys, const BasePoint& w,
                                  int horizon, std::uint64_t seed = 9);

struct OracleResult {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string witness; // worst-case inputs, empty when passing
};

struct BatteryOptions {
    std::uint64_t seed = 1;
    double tol = 1e-10;
    int max_pullback = 200;
    int ensemble_nodes = 512;
    /// negate one propagator entry to prove the battery can fail
    bool inject_fault = false;
};

/// Seeded sweep over every cross-module identity: cocycle composition,
/// pairing adjointness, cone monotonicity, focusing bracket, dichotomy,
/// projective-vs-norm bound, pairing positivity, dual-cone preservation,
/// gauge bracket, dual injectivity, group law of the driver, nonnegativity
/// of b, and the pairing range of the bundle directions. Failures are
/// collected with a witness, never thrown.
std::vector<OracleResult> run_identity_battery(const DelayCocycle& sys,
                                               const BasePoint& w,
                                               const BatteryOptions& opts);

bool battery_passes(const std::vector<OracleResult>& results);

} // namespace floq
