#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "floq/dual_cocycle.hpp"

namespace floq {

/// Decay record of the pullback iteration at two-unit cadence. distances[k]
/// is the projective distance between the iterates started at depths 2(k+1)
/// and 2(k+2); envelopes[k] is the certified bound
/// 2 ln kappa(deepest block) * prod of Birkhoff factors over the shallower
/// blocks, with the per-block factor tanh(ln kappa / 2).
struct ContractionDiag {
    std::vector<double> distances;
    std::vector<double> envelopes;
    std::vector<double> q_bounds; // tanh(ln kappa(theta_{-2j} w) / 2), j = 1, 2, ...
    bool converged = false;

    int iterations() const { return static_cast<int>(distances.size()) + 1; }
};

struct PullbackResult {
    StateVector w;
    ContractionDiag diag;
};

struct DualPullbackResult {
    DualVector w_star;
    ContractionDiag diag;
};

/// Unit vector in the component of e obtained as the deep-start limit of the
/// normalized cocycle images of e; stops when successive iterates are closer
/// than tol in the projective metric.
PullbackResult pullback_principal(const DelayCocycle& sys, const BasePoint& w,
                                  double tol, int max_pullback);

/// Dual mirror: the limit of normalized dual images of e_star along
/// forward-shifted starts.
DualPullbackResult pullback_dual(const DelayCocycle& sys, const BasePoint& w,
                                 double tol, int max_pullback);

/// Top exponent as the horizon average of one-unit log growths along the
/// principal direction, renormalizing each step.
double lyapunov_top(const DelayCocycle& sys, const BasePoint& w, int horizon,
                    double tol = 1e-10, int max_pullback = 200);

/// Dual counterpart; traverses the past orbit of w.
double lyapunov_top_dual(const DelayCocycle& sys, const BasePoint& w, int horizon,
                         double tol = 1e-10, int max_pullback = 200);

/// spectral projection complement: u - (<u, w*>/<w, w*>) w
StateVector project_off_bundle(const StateVector& u, const StateVector& w,
                               const DualVector& w_star, const GridSpec& g);

/// Orbit data shared by the exponent, separation, and temperedness passes:
/// the principal direction propagated forward from a pullback at the anchor,
/// the dual direction recursed backward from a pullback at the far end, and
/// the per-step log growth of both.
struct BundleWorkspace {
    int horizon = 0;
    std::vector<BasePoint> points;        // theta_k w, k = 0..N
    std::vector<StateVector> w;           // unit principal direction per fiber
    std::vector<DualVector> w_star;       // unit dual direction per fiber
    std::vector<double> log_growth;       // ln |U(1) w_k|, k = 0..N-1
    std::vector<double> log_growth_dual;  // ln |U*(1) w*_{k+1}|, k = 0..N-1
    std::vector<double> pair;             // <w_k, w*_k>, k = 0..N
    ContractionDiag pullback_diag;

    double lambda1() const;
    double lambda1_dual() const;
};

BundleWorkspace build_workspace(const DelayCocycle& sys, const BasePoint& w,
                                int horizon, double tol, int max_pullback);

struct SecondExponent {
    double lambda2 = 0.0; // -inf when the complement dies in finite time
    double sigma = 0.0;   // lambda1 - lambda2, +inf when lambda2 = -inf
    double max_drift = 0.0;
};

/// Second exponent by deflated power iteration with per-step reprojection
/// onto the invariant complement; max_drift records the largest relative
/// component along the bundle seen before reprojection.
SecondExponent second_exponent(const DelayCocycle& sys, const BundleWorkspace& ws,
                               std::uint64_t seed);

/// max over t in [horizon/2, horizon] of |ln |P(theta_t w)|| / t, with the
/// projection norm estimated over seeded probes.
double temperedness_check(const DelayCocycle& sys, const BundleWorkspace& ws,
                          int horizon, int probes, std::uint64_t seed);

struct ContractionRate {
    double empirical = 0.0; // fitted log-decay slope per two-unit block
    double bound = 0.0;     // averaged ln tanh(ln kappa / 2) along the orbit
};

ContractionRate contraction_rate(const DelayCocycle& sys, const BasePoint& w,
                                 int blocks, int pairs, std::uint64_t seed);

/// Quadrature average of ln |U(1) w(omega')| against the invariant measure of
/// the driver; the second estimator of the top exponent. Nodes evaluate
/// independently; results are reduced in node order regardless of threads.
double ensemble_log_growth(const DelayCocycle& sys, int nodes, double tol,
                           int max_pullback, int threads = 1);

/// least-squares slope of ys against 0..n-1, ignoring non-finite entries
double fit_slope(const std::vector<double>& ys);

struct BundleReport {
    double lambda1 = 0.0;
    double lambda1_dual = 0.0;
    double lambda2 = 0.0;
    double sigma = 0.0;
    double pair_ww = 0.0;
    int pullback_iters = 0;
    double contraction_rate = 0.0;
    double temperedness_slope = 0.0;
    int grid_m = 0;
    double p = 2.0;
    int horizon = 0;
    std::string flow;
    std::uint64_t seed = 0;
};

struct RunParams {
    int horizon = 2000;
    double tol = 1e-10;
    int max_pullback = 200;
    std::uint64_t seed = 1;
};

BundleReport make_report(const DelayCocycle& sys, const BundleWorkspace& ws,
                         const SecondExponent& se, const RunParams& params);

BundleReport compute_bundle(const DelayCocycle& sys, const BasePoint& w,
                            const RunParams& params);

/// empty when every bundle invariant holds; otherwise one message per failure
std::vector<std::string> validate_bundle(const DelayCocycle& sys,
                                         const BundleWorkspace& ws,
                                         const BundleReport& report);

} // namespace floq
