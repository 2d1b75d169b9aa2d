#include "floq/floquet_bundle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "floq/counter_rng.hpp"
#include "floq/errors.hpp"
#include "floq/parallel.hpp"

namespace floq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

StateVector normalized(const StateVector& u, const GridSpec& g) {
    const double n = norm_x(u, g);
    if (!(n > 0.0))
        throw PullbackError("pullback iterate collapsed to zero", kInf);
    return scaled(u, 1.0 / n);
}

DualVector dual_normalized(const DualVector& v, const GridSpec& g) {
    const double n = dual_norm(v, g);
    if (!(n > 0.0))
        throw PullbackError("dual pullback iterate collapsed to zero", kInf);
    return dual_scaled(v, 1.0 / n);
}

StateVector seeded_coords(const GridSpec& g, std::uint64_t seed, std::uint64_t salt,
                          bool strictly_positive) {
    StateVector u = zero_state(g);
    auto draw = [&](int i) {
        const double x = u01(counter_hash(seed, i, salt));
        return strictly_positive ? 0.1 + 0.9 * x : x - 0.5;
    };
    u.head = draw(0);
    for (int j = 0; j < g.points(); ++j) u.tail[static_cast<std::size_t>(j)] = draw(j + 1);
    return u;
}

// push the reference direction from `depth` units below w up to w
StateVector push_from_depth(const DelayCocycle& sys, const BasePoint& w, int depth) {
    const GridSpec& g = sys.grid();
    StateVector u = e_vector(g);
    for (int j = depth; j >= 1; --j) {
        const BasePoint base = sys.shift(w, -static_cast<double>(j));
        u = normalized(sys.integrate_unit(base, u), g);
    }
    return u;
}

} // namespace

double fit_slope(const std::vector<double>& ys) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int n = 0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        if (!std::isfinite(ys[i])) continue;
        const double x = static_cast<double>(i);
        sx += x;
        sy += ys[i];
        sxx += x * x;
        sxy += x * ys[i];
        ++n;
    }
    if (n < 2) return 0.0;
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) return 0.0;
    return (n * sxy - sx * sy) / denom;
}

PullbackResult pullback_principal(const DelayCocycle& sys, const BasePoint& w,
                                  double tol, int max_pullback) {
    if (!(tol > 0.0)) throw std::invalid_argument("pullback_principal: tol must be > 0");
    if (max_pullback < 2) max_pullback = 2;

    ContractionDiag diag;
    std::vector<double> ln_kappa; // at theta_{-2j} w, j = 1, 2, ...
    auto ensure_kappa = [&](int j) {
        while (static_cast<int>(ln_kappa.size()) < j) {
            const int jj = static_cast<int>(ln_kappa.size()) + 1;
            const double k = sys.kappa(sys.shift(w, -2.0 * static_cast<double>(jj)));
            ln_kappa.push_back(std::log(k));
            diag.q_bounds.push_back(std::tanh(0.5 * ln_kappa.back()));
        }
    };

    StateVector prev = push_from_depth(sys, w, 2);
    double last = kInf;
    double q_product = 1.0; // prod of q over blocks 1..k-2
    for (int k = 2; k <= max_pullback; ++k) {
        StateVector cur = push_from_depth(sys, w, 2 * k);
        const double d = proj_dist(prev, cur);
        ensure_kappa(k - 1);
        if (k > 2) q_product *= diag.q_bounds[static_cast<std::size_t>(k - 3)];
        diag.distances.push_back(d);
        diag.envelopes.push_back(2.0 * ln_kappa[static_cast<std::size_t>(k - 2)] * q_product);
        if (d < tol) {
            diag.converged = true;
            return {cur, diag};
        }
        prev = cur;
        last = d;
    }
    throw PullbackError("pullback_principal: no convergence within max_pullback "
                        "(last distance " + std::to_string(last) + ")",
                        last);
}

DualPullbackResult pullback_dual(const DelayCocycle& sys, const BasePoint& w,
                                 double tol, int max_pullback) {
    if (!(tol > 0.0)) throw std::invalid_argument("pullback_dual: tol must be > 0");
    if (max_pullback < 2) max_pullback = 2;
    const GridSpec& g = sys.grid();
    const int m = g.m();

    std::vector<Matrix> fwd; // step matrices at theta_j w, j = 0, 1, ...
    auto matrix_at = [&](int j) -> const Matrix& {
        while (static_cast<int>(fwd.size()) <= j)
            fwd.push_back(sys.step_matrix(
                sys.shift(w, static_cast<double>(fwd.size())), m));
        return fwd[static_cast<std::size_t>(j)];
    };
    auto push_dual = [&](int depth) {
        DualVector v = e_star(g);
        for (int j = depth - 1; j >= 0; --j)
            v = dual_normalized(dual_apply_matrix(matrix_at(j), v, g), g);
        return v;
    };

    ContractionDiag diag;
    std::vector<double> ln_kappa_star; // at theta_{2j} w: 2 ln kappa(theta_{2j-2} w)
    auto ensure_kappa = [&](int j) {
        while (static_cast<int>(ln_kappa_star.size()) < j) {
            const int jj = static_cast<int>(ln_kappa_star.size()) + 1;
            const double k =
                sys.kappa(sys.shift(w, 2.0 * static_cast<double>(jj - 1)));
            ln_kappa_star.push_back(2.0 * std::log(k));
            diag.q_bounds.push_back(std::tanh(0.5 * ln_kappa_star.back()));
        }
    };

    DualVector prev = push_dual(2);
    double last = kInf;
    double q_product = 1.0;
    for (int k = 2; k <= max_pullback; ++k) {
        DualVector cur = push_dual(2 * k);
        const double d = dual_proj_dist(prev, cur);
        ensure_kappa(k - 1);
        if (k > 2) q_product *= diag.q_bounds[static_cast<std::size_t>(k - 3)];
        diag.distances.push_back(d);
        diag.envelopes.push_back(2.0 * ln_kappa_star[static_cast<std::size_t>(k - 2)] * q_product);
        if (d < tol) {
            diag.converged = true;
            return {cur, diag};
        }
        prev = cur;
        last = d;
    }
    throw PullbackError("pullback_dual: no convergence within max_pullback "
                        "(last distance " + std::to_string(last) + ")",
                        last);
}

double lyapunov_top(const DelayCocycle& sys, const BasePoint& w, int horizon,
                    double tol, int max_pullback) {
    if (horizon < 1) throw std::invalid_argument("lyapunov_top: horizon must be >= 1");
    const GridSpec& g = sys.grid();
    StateVector dir = pullback_principal(sys, w, tol, max_pullback).w;
    BasePoint pt = w;
    double acc = 0.0;
    for (int k = 0; k < horizon; ++k) {
        const StateVector y = sys.integrate_unit(pt, dir);
        const double n = norm_x(y, g);
        if (!(n > 0.0))
            throw std::runtime_error("lyapunov_top: principal direction collapsed");
        acc += std::log(n);
        dir = scaled(y, 1.0 / n);
        pt = sys.shift(pt, 1.0);
    }
    return acc / static_cast<double>(horizon);
}

double lyapunov_top_dual(const DelayCocycle& sys, const BasePoint& w, int horizon,
                         double tol, int max_pullback) {
    if (horizon < 1) throw std::invalid_argument("lyapunov_top_dual: horizon must be >= 1");
    const GridSpec& g = sys.grid();
    DualVector dir = pullback_dual(sys, w, tol, max_pullback).w_star;
    BasePoint pt = w;
    double acc = 0.0;
    for (int k = 0; k < horizon; ++k) {
        const DualVector y = dual_unit_step(sys, pt, dir);
        const double n = dual_norm(y, g);
        if (!(n > 0.0))
            throw std::runtime_error("lyapunov_top_dual: dual direction collapsed");
        acc += std::log(n);
        dir = dual_scaled(y, 1.0 / n);
        pt = sys.shift(pt, -1.0);
    }
    return acc / static_cast<double>(horizon);
}

StateVector project_off_bundle(const StateVector& u, const StateVector& w,
                               const DualVector& w_star, const GridSpec& g) {
    const double denom = pairing(w, w_star, g);
    if (denom < 1e-14)
        throw DegenerateBundleError(
            "project_off_bundle: <w, w*> below 1e-14, bundle is degenerate");
    const double c = pairing(u, w_star, g) / denom;
    return sub(u, scaled(w, c));
}

double BundleWorkspace::lambda1() const {
    double acc = 0.0;
    for (double v : log_growth) acc += v;
    return acc / static_cast<double>(log_growth.size());
}

double BundleWorkspace::lambda1_dual() const {
    double acc = 0.0;
    for (double v : log_growth_dual) acc += v;
    return acc / static_cast<double>(log_growth_dual.size());
}

BundleWorkspace build_workspace(const DelayCocycle& sys, const BasePoint& w,
                                int horizon, double tol, int max_pullback) {
    if (horizon < 1) throw std::invalid_argument("build_workspace: horizon must be >= 1");
    const GridSpec& g = sys.grid();
    const std::size_t n = static_cast<std::size_t>(horizon);

    BundleWorkspace ws;
    ws.horizon = horizon;
    ws.points.resize(n + 1);
    ws.points[0] = w;
    for (std::size_t k = 0; k < n; ++k)
        ws.points[k + 1] = sys.shift(ws.points[k], 1.0);

    auto pb = pullback_principal(sys, w, tol, max_pullback);
    ws.pullback_diag = std::move(pb.diag);
    ws.w.resize(n + 1);
    ws.w[0] = std::move(pb.w);
    ws.log_growth.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const StateVector y = sys.integrate_unit(ws.points[k], ws.w[k]);
        const double nn = norm_x(y, g);
        if (!(nn > 0.0))
            throw std::runtime_error("build_workspace: principal direction collapsed");
        ws.log_growth[k] = std::log(nn);
        ws.w[k + 1] = scaled(y, 1.0 / nn);
    }

    ws.w_star.resize(n + 1);
    ws.w_star[n] = pullback_dual(sys, ws.points[n], tol, max_pullback).w_star;
    ws.log_growth_dual.resize(n);
    for (std::size_t k = n; k-- > 0;) {
        const Matrix fwd = sys.step_matrix(ws.points[k], g.m());
        const DualVector y = dual_apply_matrix(fwd, ws.w_star[k + 1], g);
        const double nn = dual_norm(y, g);
        if (!(nn > 0.0))
            throw std::runtime_error("build_workspace: dual direction collapsed");
        ws.log_growth_dual[k] = std::log(nn);
        ws.w_star[k] = dual_scaled(y, 1.0 / nn);
    }

    ws.pair.resize(n + 1);
    for (std::size_t k = 0; k <= n; ++k)
        ws.pair[k] = pairing(ws.w[k], ws.w_star[k], g);
    return ws;
}

SecondExponent second_exponent(const DelayCocycle& sys, const BundleWorkspace& ws,
                               std::uint64_t seed) {
    const GridSpec& g = sys.grid();
    const int n = ws.horizon;

    StateVector v = seeded_coords(g, seed, 0x5ec0, /*strictly_positive=*/false);
    v = project_off_bundle(v, ws.w[0], ws.w_star[0], g);
    const double n0 = norm_x(v, g);
    if (!(n0 > 0.0))
        throw std::runtime_error("second_exponent: seeded probe lies on the bundle");
    v = scaled(v, 1.0 / n0);

    SecondExponent out;
    double acc = 0.0;
    for (int k = 0; k < n; ++k) {
        const std::size_t kk = static_cast<std::size_t>(k);
        StateVector y = sys.integrate_unit(ws.points[kk], v);
        const double ny = norm_x(y, g);
        if (ny > 0.0) {
            const double drift =
                std::abs(pairing(y, ws.w_star[kk + 1], g)) / ny;
            out.max_drift = std::max(out.max_drift, drift);
        }
        y = project_off_bundle(y, ws.w[kk + 1], ws.w_star[kk + 1], g);
        const double growth = norm_x(y, g);
        if (growth <= kZeroTol) {
            out.lambda2 = -kInf;
            out.sigma = kInf;
            return out;
        }
        acc += std::log(growth);
        v = scaled(y, 1.0 / growth);
    }
    out.lambda2 = acc / static_cast<double>(n);
    out.sigma = ws.lambda1() - out.lambda2;
    if (!(out.sigma > 0.0))
        throw SeparationError(
            "second_exponent: nonpositive separation; the grid is too coarse or "
            "the horizon too short for this configuration");
    return out;
}

double temperedness_check(const DelayCocycle& sys, const BundleWorkspace& ws,
                          int horizon, int probes, std::uint64_t seed) {
    if (horizon < 2 || horizon > ws.horizon)
        throw std::invalid_argument("temperedness_check: horizon out of range");
    const GridSpec& g = sys.grid();
    std::vector<StateVector> probe_vecs;
    probe_vecs.reserve(static_cast<std::size_t>(probes));
    for (int i = 0; i < probes; ++i)
        probe_vecs.push_back(seeded_coords(g, seed, 0x7e3 + static_cast<std::uint64_t>(i),
                                           /*strictly_positive=*/false));

    double worst = 0.0;
    for (int t = horizon / 2; t <= horizon; ++t) {
        const std::size_t tt = static_cast<std::size_t>(t);
        double pnorm = 0.0;
        for (const auto& u : probe_vecs) {
            const StateVector pu = project_off_bundle(u, ws.w[tt], ws.w_star[tt], g);
            pnorm = std::max(pnorm, norm_x(pu, g) / norm_x(u, g));
        }
        if (pnorm > 0.0)
            worst = std::max(worst, std::abs(std::log(pnorm)) / static_cast<double>(t));
    }
    return worst;
}

ContractionRate contraction_rate(const DelayCocycle& sys, const BasePoint& w,
                                 int blocks, int pairs, std::uint64_t seed) {
    if (blocks < 2) throw std::invalid_argument("contraction_rate: need >= 2 blocks");
    const GridSpec& g = sys.grid();

    ContractionRate out;
    double bound_acc = 0.0;
    {
        BasePoint pt = w;
        for (int k = 0; k < blocks; ++k) {
            bound_acc += std::log(std::tanh(0.5 * std::log(sys.kappa(pt))));
            pt = sys.shift(pt, 2.0);
        }
    }
    out.bound = bound_acc / static_cast<double>(blocks);

    double slope_acc = 0.0;
    int used = 0;
    for (int p = 0; p < pairs; ++p) {
        StateVector u = seeded_coords(g, seed, 2 * static_cast<std::uint64_t>(p) + 1, true);
        StateVector v = seeded_coords(g, seed, 2 * static_cast<std::uint64_t>(p) + 2, true);
        std::vector<double> log_d;
        BasePoint pt = w;
        double d = proj_dist(u, v);
        log_d.push_back(std::log(d));
        for (int k = 0; k < blocks; ++k) {
            u = normalized(sys.apply(pt, 2.0, u), g);
            v = normalized(sys.apply(pt, 2.0, v), g);
            d = proj_dist(u, v);
            if (!(d > 1e-13)) break;
            log_d.push_back(std::log(d));
            pt = sys.shift(pt, 2.0);
        }
        if (log_d.size() >= 2) {
            slope_acc += fit_slope(log_d);
            ++used;
        }
    }
    out.empirical = (used > 0) ? slope_acc / static_cast<double>(used) : 0.0;
    return out;
}

double ensemble_log_growth(const DelayCocycle& sys, int nodes, double tol,
                           int max_pullback, int threads) {
    const InvariantQuadrature quad = invariant_quadrature(sys.flow(), nodes);
    const GridSpec& g = sys.grid();
    const std::size_t n = quad.nodes.size();
    std::vector<double> values(n, 0.0);
    auto job = [&](std::size_t i) {
        const StateVector dir =
            pullback_principal(sys, quad.nodes[i], tol, max_pullback).w;
        values[i] = std::log(norm_x(sys.integrate_unit(quad.nodes[i], dir), g));
    };
    parallel_for(n, threads, job);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += quad.weights[i] * values[i];
    return acc;
}

BundleReport compute_bundle(const DelayCocycle& sys, const BasePoint& w,
                            const RunParams& params) {
    const BundleWorkspace ws = build_workspace(sys, w, params.horizon, params.tol,
                                               params.max_pullback);
    const SecondExponent se = second_exponent(sys, ws, params.seed);
    return make_report(sys, ws, se, params);
}

BundleReport make_report(const DelayCocycle& sys, const BundleWorkspace& ws,
                         const SecondExponent& se, const RunParams& params) {
    BundleReport rep;
    rep.lambda1 = ws.lambda1();
    rep.lambda1_dual = ws.lambda1_dual();
    rep.lambda2 = se.lambda2;
    rep.sigma = se.sigma;
    rep.pair_ww = ws.pair.front();
    rep.pullback_iters = ws.pullback_diag.iterations();
    {
        std::vector<double> log_d;
        log_d.reserve(ws.pullback_diag.distances.size());
        for (double d : ws.pullback_diag.distances)
            log_d.push_back(d > 0.0 ? std::log(d) : -kInf);
        rep.contraction_rate = fit_slope(log_d);
    }
    rep.temperedness_slope =
        temperedness_check(sys, ws, ws.horizon, 32, params.seed);
    rep.grid_m = sys.grid().m();
    rep.p = sys.grid().p();
    rep.horizon = ws.horizon;
    rep.flow = std::holds_alternative<TorusFlow>(sys.flow()) ? "torus" : "telegraph";
    rep.seed = params.seed;
    return rep;
}

std::vector<std::string> validate_bundle(const DelayCocycle& sys,
                                         const BundleWorkspace& ws,
                                         const BundleReport& report) {
    std::vector<std::string> issues;
    const GridSpec& g = sys.grid();
    if (std::abs(norm_x(ws.w.front(), g) - 1.0) > 1e-10)
        issues.push_back("principal direction is not unit norm");
    if (std::abs(dual_norm(ws.w_star.front(), g) - 1.0) > 1e-10)
        issues.push_back("dual direction is not unit norm");
    if (!in_cone(ws.w.front()))
        issues.push_back("principal direction left the cone");
    if (!in_dual_cone(ws.w_star.front()))
        issues.push_back("dual direction left the dual cone");
    for (double pr : ws.pair) {
        if (!(pr > 0.0 && pr <= 1.0 + 1e-12)) {
            issues.push_back("pairing <w, w*> left (0, 1]");
            break;
        }
    }
    if (std::isfinite(report.lambda2)) {
        if (!(report.sigma > 0.0))
            issues.push_back("finite second exponent without positive separation");
    } else if (report.sigma != kInf) {
        issues.push_back("second exponent is -inf but sigma is not +inf");
    }
    if (!comparable(ws.w.front(), e_vector(g)))
        issues.push_back("principal direction is not comparable with e");
    return issues;
}

} // namespace floq
