#include "floq/oracles.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "floq/counter_rng.hpp"
#include "floq/errors.hpp"

namespace floq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_witness(const char* fmt, double a, double b, double c) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), fmt, a, b, c);
    return buf;
}

StateVector seeded_state(const GridSpec& g, std::uint64_t seed, std::uint64_t salt,
                         bool positive) {
    StateVector u = zero_state(g);
    auto draw = [&](int i) {
        const double x = u01(counter_hash(seed, i, salt));
        return positive ? x : x - 0.5;
    };
    u.head = draw(0);
    for (int j = 0; j < g.points(); ++j) u.tail[static_cast<std::size_t>(j)] = draw(j + 1);
    return u;
}

DualVector seeded_dual(const GridSpec& g, std::uint64_t seed, std::uint64_t salt) {
    DualVector v = zero_dual(g);
    v.head = u01(counter_hash(seed, 0, salt));
    for (int j = 0; j < g.points(); ++j)
        v.tail[static_cast<std::size_t>(j)] = u01(counter_hash(seed, j + 1, salt));
    return v;
}

double weighted_ip(const GridSpec& g, const std::vector<double>& x,
                   const std::vector<double>& y) {
    double acc = x[0] * y[0];
    for (int j = 0; j < g.points(); ++j)
        acc += g.weight(j) * x[static_cast<std::size_t>(j) + 1] *
               y[static_cast<std::size_t>(j) + 1];
    return acc;
}

} // namespace

double characteristic_root(double a0, double b0) {
    if (b0 < 0.0)
        throw std::invalid_argument("characteristic_root: b0 must be nonnegative");
    if (b0 == 0.0) return a0;
    auto f = [&](double x) { return x - a0 - b0 * std::exp(-x); };
    double lo = a0 - 1.0; // f(lo) < 0 always
    double hi = a0 + b0 + 1.0;
    int guard = 0;
    while (f(hi) <= 0.0 && guard++ < 200) hi += std::max(1.0, hi - lo);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo) + std::abs(hi));
         ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

BenettinResult benettin_exponents(const DelayCocycle& sys, const BasePoint& w,
                                  int horizon, std::uint64_t seed) {
    if (horizon < 10)
        throw std::invalid_argument("benettin_exponents: horizon must be >= 10");
    const GridSpec& g = sys.grid();
    const int dim = g.dim();

    std::vector<double> v1(static_cast<std::size_t>(dim)), v2(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) {
        v1[static_cast<std::size_t>(i)] = u01(counter_hash(seed, i, 0xbe1)) - 0.5;
        v2[static_cast<std::size_t>(i)] = u01(counter_hash(seed, i, 0xbe2)) - 0.5;
    }

    auto normalize = [&](std::vector<double>& v) {
        const double n = std::sqrt(weighted_ip(g, v, v));
        for (double& x : v) x /= n;
        return n;
    };
    normalize(v1);

    BasePoint pt = w;
    // settle the leading probe for one step, then start the second probe
    // orthonormal to it, so the averages measure growth of the settled frame
    {
        const Matrix A = sys.step_matrix(pt, g.m());
        v1 = A.apply(v1);
        normalize(v1);
        pt = sys.shift(pt, 1.0);
    }
    {
        const double c = weighted_ip(g, v1, v2);
        for (std::size_t i = 0; i < v2.size(); ++i) v2[i] -= c * v1[i];
        normalize(v2);
    }

    double acc1 = 0.0, acc2 = 0.0;
    for (int k = 0; k < horizon; ++k) {
        const Matrix A = sys.step_matrix(pt, g.m());
        v1 = A.apply(v1);
        v2 = A.apply(v2);
        const double r11 = normalize(v1);
        const double c = weighted_ip(g, v1, v2);
        for (std::size_t i = 0; i < v2.size(); ++i) v2[i] -= c * v1[i];
        const double r22 = std::sqrt(weighted_ip(g, v2, v2));
        acc1 += std::log(r11);
        if (!(r22 > 1e-14 * std::max(1.0, r11)))
            return {acc1 / static_cast<double>(k + 1), -kInf};
        for (double& x : v2) x /= r22;
        acc2 += std::log(r22);
        pt = sys.shift(pt, 1.0);
    }
    return {acc1 / static_cast<double>(horizon), acc2 / static_cast<double>(horizon)};
}

namespace {

struct BatteryContext {
    const DelayCocycle& sys;
    const BasePoint& base;
    const BatteryOptions& opts;
    std::vector<OracleResult> results;

    void record(const std::string& name, double residual, double tolerance,
                const std::string& witness) {
        OracleResult r;
        r.name = name;
        r.residual = residual;
        r.tolerance = tolerance;
        r.pass = residual <= tolerance;
        if (!r.pass) r.witness = witness;
        results.push_back(std::move(r));
    }
};

Matrix battery_unit_matrix(const BatteryContext& ctx, const BasePoint& w) {
    Matrix A = ctx.sys.step_matrix(w, ctx.sys.grid().m());
    if (ctx.opts.inject_fault) A(0, 0) = -std::abs(A(0, 0)) - 1.0;
    return A;
}

void check_flow_group_law(BatteryContext& ctx) {
    const double h = ctx.sys.grid().step();
    double worst = 0.0;
    std::string witness;
    for (int i = 0; i < 64; ++i) {
        const double s =
            h * static_cast<double>(1 + counter_hash(ctx.opts.seed, i, 0xf1) % 512);
        const double t =
            h * static_cast<double>(1 + counter_hash(ctx.opts.seed, i, 0xf2) % 512);
        const BasePoint lhs = advance(ctx.sys.flow(), ctx.base, s + t);
        const BasePoint rhs =
            advance(ctx.sys.flow(), advance(ctx.sys.flow(), ctx.base, s), t);
        double diff = 0.0;
        if (std::holds_alternative<TorusPoint>(lhs)) {
            double d = std::abs(std::get<TorusPoint>(lhs).angle -
                                std::get<TorusPoint>(rhs).angle);
            diff = std::min(d, 1.0 - d);
        } else {
            diff = (std::get<TelegraphPoint>(lhs).state ==
                    std::get<TelegraphPoint>(rhs).state)
                       ? 0.0
                       : 1.0;
        }
        if (diff > worst) {
            worst = diff;
            witness = format_witness("s=%.17g t=%.17g diff=%.3g", s, t, diff);
        }
    }
    ctx.record("flow-group-law", worst, 1e-12, witness);
}

void check_b_nonnegative(BatteryContext& ctx) {
    double min_b = kInf;
    double at = 0.0;
    if (ctx.sys.coeffs().is_harmonic()) {
        for (int i = 0; i < 4096; ++i) {
            const double angle = static_cast<double>(i) / 4096.0;
            const double b = ctx.sys.coeffs().b(TorusPoint{angle});
            if (b < min_b) {
                min_b = b;
                at = angle;
            }
        }
    } else {
        for (int s = 0; s < ctx.sys.coeffs().table_size(); ++s) {
            const double b = ctx.sys.coeffs().b(TelegraphPoint{0, s});
            if (b < min_b) {
                min_b = b;
                at = static_cast<double>(s);
            }
        }
    }
    ctx.record("coefficient-b-nonnegative", std::max(0.0, -min_b), 1e-15,
               format_witness("min b=%.17g at driver coordinate %.17g", min_b, at, 0.0));
}

void check_cocycle_composition(BatteryContext& ctx) {
    const GridSpec& g = ctx.sys.grid();
    const double h = g.step();
    double worst = 0.0;
    std::string witness;
    for (int i = 0; i < 32; ++i) {
        const BasePoint w0 = ctx.sys.shift(
            ctx.base, static_cast<double>(counter_hash(ctx.opts.seed, i, 0xc0) % 7));
        // evolved initial data: a state the flow itself visits
        const StateVector u = ctx.sys.integrate_unit(
            ctx.sys.shift(w0, -1.0), seeded_state(g, ctx.opts.seed, 0xc1 + i, false));
        const double s =
            h * static_cast<double>(1 + counter_hash(ctx.opts.seed, i, 0xc2) % (3 * g.m()));
        const double t =
            h * static_cast<double>(1 + counter_hash(ctx.opts.seed, i, 0xc3) % (3 * g.m()));
        const StateVector direct = ctx.sys.apply(w0, s + t, u);
        const StateVector split =
            ctx.sys.apply(ctx.sys.shift(w0, s), t, ctx.sys.apply(w0, s, u));
        const double rel =
            norm_x(sub(direct, split), g) / std::max(1e-300, norm_x(direct, g));
        if (rel > worst) {
            worst = rel;
            witness = format_witness("s=%.17g t=%.17g rel=%.3g", s, t, rel);
        }
    }
    ctx.record("cocycle-composition", worst, 1e-13, witness);
}

void check_pairing_adjoint(BatteryContext& ctx) {
    const GridSpec& g = ctx.sys.grid();
    const double h = g.step();
    double worst = 0.0;
    std::string witness;
    for (int i = 0; i < 32; ++i) {
        const StateVector u = seeded_state(g, ctx.opts.seed, 0xd1 + i, false);
        const DualVector v = seeded_dual(g, ctx.opts.seed, 0xd2 + i);
        const double t =
            h * static_cast<double>(1 + counter_hash(ctx.opts.seed, i, 0xd3) % (5 * g.m()));
        const StateVector fu = ctx.sys.apply(ctx.sys.shift(ctx.base, -t), t, u);
        const DualVector dv = dual_apply(ctx.sys, ctx.base, t, v);
        const double lhs = pairing(fu, v, g);
        const double rhs = pairing(u, dv, g);
        const double scale = std::max(1e-300, norm_x(u, g) * dual_norm(v, g));
        const double rel = std::abs(lhs - rhs) / scale;
        if (rel > worst) {
            worst = rel;
            witness = format_witness("t=%.17g lhs=%.17g rel=%.3g", t, lhs, rel);
        }
    }
    ctx.record("pairing-adjoint", worst, 1e-12, witness);
}

void check_cone_monotonicity(BatteryContext& ctx) {
    const GridSpec& g = ctx.sys.grid();
    double worst = 0.0;
    std::string witness;
    for (int i = 0; i < 24; ++i) {
        const BasePoint w0 = ctx.sys.shift(
            ctx.base, static_cast<double>(counter_hash(ctx.opts.seed, i, 0xe0) % 5));
        const Matrix A = battery_unit_matrix(ctx, w0);
        const StateVector lo = seeded_state(g, ctx.opts.seed, 0xe1 + i, true);
        const StateVector gap = seeded_state(g, ctx.opts.seed, 0xe2 + i, true);
        const StateVector hi = add(lo, gap);
        const auto alo = A.apply(to_coords(lo));
        const auto ahi = A.apply(to_coords(hi));
        for (std::size_t c = 0; c < alo.size(); ++c) {
            const double viol = (alo[c] - ahi[c]) /
                                std::max(1.0, std::abs(ahi[c]));
            if (viol > worst) {
                worst = viol;
                witness = format_witness("pair %.0f component %.0f excess %.3g",
                                         static_cast<double>(i), static_cast<double>(c),
                                         viol);
            }
        }
    }
    ctx.record("cone-monotonicity", worst, 1e-12, witness);
}

void check_focusing_bracket(BatteryContext& ctx) {
    const GridSpec& g = ctx.sys.grid();
    const StateVector e = e_vector(g);
    double worst = 0.0;
    std::string witness;
    for (int i = 0; i < 40; ++i) {
        const BasePoint w0 = ctx.sys.shift(
            ctx.base, static_cast<double>(counter_hash(ctx.opts.seed, i, 0xa0) % 9));
        const StateVector u = seeded_state(g, ctx.opts.seed, 0xa1 + i, true);
        const auto fc = ctx.sys.focusing_constants(w0, u);
        if (!fc) continue;
        const StateVector img = ctx.sys.apply(w0, 2.0, u);
        const auto ic = to_coords(img);
        const auto ec = to_coords(e);
        for (std::size_t c = 0; c < ic.size(); ++c) {
            const double lo = fc->beta * ec[c];
            const double hi = fc->kappa * fc->beta * ec[c];
            const double scale = std::max(hi, 1e-300);
            const double viol = std::max(lo - ic[c], ic[c] - hi) / scale;
            if (viol > worst) {
                worst = viol;
                witness = format_witness("vector %.0f component %.0f excess %.3g",
                                         static_cast<double>(i), static_cast<double>(c),
                                         viol);
            }
        }
    }
    ctx.record("focusing-bracket", worst, 1e-10, witness);
}

void check_dichotomy(BatteryContext& ctx) {
    const GridSpec& g = ctx.sys.grid();
    const StateVector e = e_vector(g);
    const double h = g.step();
    double failures = 0.0;
    std::string witness;
    for (int i = 0; i < 16; ++i) {
        const StateVector u = seeded_state(g, ctx.opts.seed, 0xb1 + i, true);
        StateVector cur = u;
        if (ctx.opts.inject_fault) {
            const Matrix A = battery_unit_matrix(ctx, ctx.base);
            cur = from_coords(g, A.apply(to_coords(u)));
            cur = from_coords(
                g, battery_unit_matrix(ctx, ctx.sys.shift(ctx.base, 1.0)).apply(to_coords(cur)));
        } else {
            cur = ctx.sys.apply(ctx.base, 2.0, u);
        }
        const bool dead = norm_x(cur, g) <= kZeroTol * norm_x(u, g);
        for (double extra : {0.0, h, 1.0, 2.0}) {
            const StateVector img = ctx.sys.apply(ctx.sys.shift(ctx.base, 2.0), extra, cur);
            const bool zero = norm_x(img, g) <= kZeroTol * std::max(1e-300, norm_x(u, g));
            bool ok;
            if (dead) {
                ok = zero;
            } else {
                ok = !zero && in_cone(img) && comparable(img, e);
            }
            if (!ok) {
                failures += 1.0;
                witness = format_witness("vector %.0f at extra time %.6g",
                                         static_cast<double>(i), extra, 0.0);
            }
        }
    }
    ctx.record("dichotomy", failures, 0.5, witness);
}

void check_projective_norm_bound(BatteryContext& ctx) {
    const GridSpec& g = ctx.sys.grid();
    double worst = 0.0;
    std::string witness;
    for (int i = 0; i < 40; ++i) {
        StateVector u = seeded_state(g, ctx.opts.seed, 0x91 + i, true);
        StateVector v = seeded_state(g, ctx.opts.seed, 0x92 + i, true);
        u = scaled(u, 1.0 / norm_x(u, g));
        v = scaled(v, 1.0 / norm_x(v, g));
        const auto [lhs, rhs] = projdist_norm_bound(u, v, g);
        const double excess = lhs - rhs;
        if (excess > worst) {
            worst = excess;
            witness = format_witness("pair %.0f lhs=%.17g rhs=%.17g",
                                     static_cast<double>(i), lhs, rhs);
        }
    }
    ctx.record("projective-norm-bound", std::max(0.0, worst), 1e-12, witness);
}

void check_pairing_positivity(BatteryContext& ctx) {
    const GridSpec& g = ctx.sys.grid();
    double min_pair = kInf;
    for (int i = 0; i < 40; ++i) {
        const StateVector u = seeded_state(g, ctx.opts.seed, 0x81 + i, true);
        const DualVector v = seeded_dual(g, ctx.opts.seed, 0x82 + i);
        min_pair = std::min(min_pair, pairing(u, v, g));
    }
    ctx.record("pairing-positivity", std::max(0.0, -min_pair), 1e-15,
               format_witness("min pairing %.17g", min_pair, 0.0, 0.0));
}

void check_dual_cone_preserved(BatteryContext& ctx) {
    const GridSpec& g = ctx.sys.grid();
    double worst = 0.0;
    std::string witness;
    for (int i = 0; i < 24; ++i) {
        const DualVector v = seeded_dual(g, ctx.opts.seed, 0x71 + i);
        const double t = 1.0 + static_cast<double>(counter_hash(ctx.opts.seed, i, 0x72) % 3);
        const DualVector dv = dual_apply(ctx.sys, ctx.base, t, v);
        double mn = dv.head;
        for (double x : dv.tail) mn = std::min(mn, x);
        const double viol = -mn / std::max(1.0, dual_max_abs(dv));
        if (viol > worst) {
            worst = viol;
            witness = format_witness("vector %.0f t=%.3g min=%.3g",
                                     static_cast<double>(i), t, mn);
        }
    }
    ctx.record("dual-cone-preserved", std::max(0.0, worst), 1e-15, witness);
}

void check_gauge_bracket(BatteryContext& ctx) {
    const GridSpec& g = ctx.sys.grid();
    double worst = 0.0;
    std::string witness;
    for (int i = 0; i < 40; ++i) {
        const StateVector u = seeded_state(g, ctx.opts.seed, 0x61 + i, true);
        const StateVector v = seeded_state(g, ctx.opts.seed, 0x62 + i, true);
        const ProjectiveGauge pg = gauge(u, v);
        const auto cu = to_coords(u);
        const auto cv = to_coords(v);
        for (std::size_t c = 0; c < cu.size(); ++c) {
            const double scale = std::max(1.0, std::abs(cu[c]));
            const double viol = std::max(pg.m_ratio * cv[c] - cu[c],
                                         cu[c] - pg.M_ratio * cv[c]) /
                                scale;
            if (viol > worst) {
                worst = viol;
                witness = format_witness("pair %.0f component %.0f excess %.3g",
                                         static_cast<double>(i), static_cast<double>(c),
                                         viol);
            }
        }
    }
    ctx.record("gauge-bracket", std::max(0.0, worst), 1e-12, witness);
}

void check_dual_injectivity(BatteryContext& ctx) {
    const GridSpec& g = ctx.sys.grid();
    double min_ratio = kInf;
    std::string witness;
    for (int i = 0; i < 24; ++i) {
        const DualVector v = seeded_dual(g, ctx.opts.seed, 0x51 + i);
        const double t = 1.0 + static_cast<double>(counter_hash(ctx.opts.seed, i, 0x52) % 5);
        const DualVector dv = dual_apply(ctx.sys, ctx.base, t, v);
        const double ratio = dual_norm(dv, g) / dual_norm(v, g);
        if (ratio < min_ratio) {
            min_ratio = ratio;
            witness = format_witness("vector %.0f t=%.3g ratio=%.3g",
                                     static_cast<double>(i), t, ratio);
        }
    }
    ctx.record("dual-injectivity", std::max(0.0, kZeroTol - min_ratio), 1e-15, witness);
}

void check_growth_bound(BatteryContext& ctx) {
    const GridSpec& g = ctx.sys.grid();
    double worst = 0.0;
    std::string witness;
    for (int i = 0; i < 24; ++i) {
        const BasePoint w0 = ctx.sys.shift(
            ctx.base, static_cast<double>(counter_hash(ctx.opts.seed, i, 0x40) % 7));
        const double bound = ctx.sys.growth_bound(w0);
        const StateVector u = seeded_state(g, ctx.opts.seed, 0x41 + i, false);
        const double t =
            g.step() * static_cast<double>(counter_hash(ctx.opts.seed, i, 0x42) %
                                               static_cast<std::uint64_t>(g.m()) +
                                           1);
        const double ratio = norm_x(ctx.sys.apply(w0, t, u), g) / norm_x(u, g);
        const double excess = (ratio - bound) / bound;
        if (excess > worst) {
            worst = excess;
            witness = format_witness("vector %.0f t=%.4f ratio=%.6g",
                                     static_cast<double>(i), t, ratio);
        }
    }
    ctx.record("growth-bound", std::max(0.0, worst), 1e-12, witness);
}

void check_ergodic_average(BatteryContext& ctx) {
    const double mean_a =
        quad_average(invariant_quadrature(ctx.sys.flow(),
                                          std::max(1, ctx.opts.ensemble_nodes)),
                     [&](const BasePoint& p) { return ctx.sys.coeffs().a(p); });
    const double h = ctx.sys.grid().step();
    auto residual_at = [&](double horizon) {
        const int n = static_cast<int>(horizon / h);
        double acc = 0.0;
        BasePoint pt = ctx.base;
        for (int k = 0; k < n; ++k) {
            acc += ctx.sys.coeffs().a(pt);
            pt = advance(ctx.sys.flow(), pt, h);
        }
        return std::abs(acc / n - mean_a);
    };
    const double short_resid = residual_at(100.0);
    const double long_resid = residual_at(1000.0);
    ctx.record("ergodic-average-decay", std::max(0.0, long_resid - short_resid),
               1e-15,
               format_witness("residual at T=100: %.6g, at T=1000: %.6g",
                              short_resid, long_resid, 0.0));
}

void check_bundle_pairing_range(BatteryContext& ctx) {
    double worst = 0.0;
    std::string witness;
    try {
        const BundleWorkspace ws =
            build_workspace(ctx.sys, ctx.base, 20, ctx.opts.tol, ctx.opts.max_pullback);
        for (std::size_t k = 0; k < ws.pair.size(); ++k) {
            const double pr = ws.pair[k];
            const double viol = std::max(1e-14 - pr, pr - (1.0 + 1e-12));
            if (viol > worst) {
                worst = viol;
                witness = format_witness("step %.0f pairing %.17g",
                                         static_cast<double>(k), pr, 0.0);
            }
        }
    } catch (const std::exception& ex) {
        worst = 1.0;
        witness = ex.what();
    }
    ctx.record("bundle-pairing-range", std::max(0.0, worst), 1e-15, witness);
}

} // namespace

std::vector<OracleResult> run_identity_battery(const DelayCocycle& sys,
                                               const BasePoint& w,
                                               const BatteryOptions& opts) {
    BatteryContext ctx{sys, w, opts, {}};
    check_flow_group_law(ctx);
    check_b_nonnegative(ctx);
    check_cocycle_composition(ctx);
    check_pairing_adjoint(ctx);
    check_cone_monotonicity(ctx);
    check_focusing_bracket(ctx);
    check_dichotomy(ctx);
    check_projective_norm_bound(ctx);
    check_pairing_positivity(ctx);
    check_dual_cone_preserved(ctx);
    check_gauge_bracket(ctx);
    check_dual_injectivity(ctx);
    check_growth_bound(ctx);
    check_ergodic_average(ctx);
    check_bundle_pairing_range(ctx);
    return std::move(ctx.results);
}

bool battery_passes(const std::vector<OracleResult>& results) {
    for (const auto& r : results)
        if (!r.pass) return false;
    return true;
}

} // namespace floq
