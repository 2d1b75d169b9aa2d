#include "floq/base_flow.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "floq/counter_rng.hpp"

namespace floq {

namespace {

double frac(double x) { return x - std::floor(x); }

// Transition across tick k: (switch?, cyclic offset). The offset map
// s -> (s + 1 + r) mod S is a bijection, so the path extends to negative
// ticks by inversion.
struct TickDraw {
    bool switches;
    int offset;
};

TickDraw tick_draw(const TelegraphFlow& f, std::int64_t k) {
    const double p_switch = -std::expm1(-f.hold_rate * f.tick);
    TickDraw d;
    d.switches = u01(counter_hash(f.seed, k, 0)) < p_switch;
    d.offset = (f.states > 2)
                   ? static_cast<int>(counter_hash(f.seed, k, 1) %
                                      static_cast<std::uint64_t>(f.states - 1))
                   : 0;
    return d;
}

int step_forward(const TelegraphFlow& f, std::int64_t k, int state) {
    const TickDraw d = tick_draw(f, k);
    if (!d.switches) return state;
    return (state + 1 + d.offset) % f.states;
}

int step_backward(const TelegraphFlow& f, std::int64_t k, int state) {
    const TickDraw d = tick_draw(f, k);
    if (!d.switches) return state;
    const int s = (state - 1 - d.offset) % f.states;
    return (s + f.states) % f.states;
}

std::int64_t aligned_ticks(const TelegraphFlow& f, double t) {
    const double r = t / f.tick;
    const double k = std::round(r);
    if (std::abs(r - k) > 1e-9 * std::max(1.0, std::abs(r)))
        throw std::invalid_argument(
            "advance: telegraph time is not a multiple of the tick");
    return static_cast<std::int64_t>(k);
}

} // namespace

BasePoint torus_point(double angle) { return TorusPoint{frac(angle)}; }

BasePoint telegraph_point(const TelegraphFlow& flow, int state0) {
    if (state0 < 0 || state0 >= flow.states)
        throw std::invalid_argument("telegraph_point: state out of range");
    return TelegraphPoint{0, state0};
}

BasePoint advance(const Flow& flow, const BasePoint& w, double t) {
    if (t == 0.0) return w;
    if (std::holds_alternative<TorusFlow>(flow)) {
        const auto& f = std::get<TorusFlow>(flow);
        const auto& p = std::get<TorusPoint>(w);
        return TorusPoint{frac(p.angle + f.gamma * t)};
    }
    const auto& f = std::get<TelegraphFlow>(flow);
    auto p = std::get<TelegraphPoint>(w);
    std::int64_t steps = aligned_ticks(f, t);
    while (steps > 0) {
        ++p.pos;
        p.state = step_forward(f, p.pos, p.state);
        --steps;
    }
    while (steps < 0) {
        p.state = step_backward(f, p.pos, p.state);
        --p.pos;
        ++steps;
    }
    return p;
}

CoeffSpec CoeffSpec::harmonic(double a0, double a1, double b0, double b1) {
    if (b0 < std::abs(b1))
        throw std::invalid_argument(
            "CoeffSpec: delay coefficient can go negative; b0 >= |b1| is required "
            "so that b stays nonnegative at every driver point");
    CoeffSpec c;
    c.harmonic_ = true;
    c.a0_ = a0;
    c.a1_ = a1;
    c.b0_ = b0;
    c.b1_ = b1;
    return c;
}

CoeffSpec CoeffSpec::tables(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || a.size() != b.size())
        throw std::invalid_argument("CoeffSpec: tables must be nonempty and equal-sized");
    for (double v : b)
        if (v < 0.0)
            throw std::invalid_argument(
                "CoeffSpec: delay coefficient table has a negative entry; "
                "b must be nonnegative in every state");
    CoeffSpec c;
    c.harmonic_ = false;
    c.a_table_ = std::move(a);
    c.b_table_ = std::move(b);
    return c;
}

double CoeffSpec::a(const BasePoint& w) const {
    if (harmonic_) {
        const auto& p = std::get<TorusPoint>(w);
        return a0_ + a1_ * std::cos(2.0 * std::numbers::pi * p.angle);
    }
    const auto& p = std::get<TelegraphPoint>(w);
    return a_table_[static_cast<std::size_t>(p.state)];
}

double CoeffSpec::b(const BasePoint& w) const {
    if (harmonic_) {
        const auto& p = std::get<TorusPoint>(w);
        const double v = b0_ + b1_ * std::cos(2.0 * std::numbers::pi * p.angle);
        return v < 0.0 ? 0.0 : v; // guards the last rounding ulp when b0 = |b1|
    }
    const auto& p = std::get<TelegraphPoint>(w);
    return b_table_[static_cast<std::size_t>(p.state)];
}

InvariantQuadrature invariant_quadrature(const Flow& flow, int n) {
    if (n < 1) throw std::invalid_argument("invariant_quadrature: n must be >= 1");
    InvariantQuadrature quad;
    if (std::holds_alternative<TorusFlow>(flow)) {
        quad.nodes.reserve(static_cast<std::size_t>(n));
        const double w = 1.0 / static_cast<double>(n);
        for (int j = 0; j < n; ++j) {
            quad.nodes.push_back(TorusPoint{static_cast<double>(j) * w});
            quad.weights.push_back(w);
        }
        return quad;
    }
    const auto& f = std::get<TelegraphFlow>(flow);
    const double w = 1.0 / static_cast<double>(f.states);
    for (int s = 0; s < f.states; ++s) {
        quad.nodes.push_back(TelegraphPoint{0, s});
        quad.weights.push_back(w);
    }
    return quad;
}

} // namespace floq
