#pragma once

#include <cstdint>
#include <variant>
#include <vector>

namespace floq {

/// Irrational rotation of the circle; angle advances by gamma per unit time.
struct TorusFlow {
    double gamma = 0.41421356237309515; // sqrt(2) - 1
};

/// Finite-state telegraph driver realized as a two-sided discrete-time shift
/// with one tick per grid step. Holding times are geometric: at each tick the
/// state switches with probability 1 - exp(-hold_rate * tick), and the target
/// is drawn uniformly among the other states via a cyclic offset, so the
/// stationary distribution is uniform. All draws are counter-mode functions
/// of (seed, tick index); the path is reproducible in both time directions.
struct TelegraphFlow {
    int states = 2;
    double tick = 1.0 / 64.0;
    double hold_rate = 1.0;
    std::uint64_t seed = 1;
};

using Flow = std::variant<TorusFlow, TelegraphFlow>;

struct TorusPoint {
    double angle = 0.0; // reduced mod 1
};

struct TelegraphPoint {
    std::int64_t pos = 0;
    int state = 0;
};

using BasePoint = std::variant<TorusPoint, TelegraphPoint>;

BasePoint torus_point(double angle);
BasePoint telegraph_point(const TelegraphFlow& flow, int state0);

/// One-parameter group action. Telegraph times must be multiples of the tick.
BasePoint advance(const Flow& flow, const BasePoint& w, double t);

/// Coefficient functions a, b evaluated along the driver; b is nonnegative
/// everywhere, which is validated at construction.
class CoeffSpec {
public:
    /// a = a0 + a1 cos(2 pi angle), b = b0 + b1 cos(2 pi angle); needs b0 >= |b1|
    static CoeffSpec harmonic(double a0, double a1, double b0, double b1);
    /// per-state tables for the telegraph driver; needs b >= 0 entrywise
    static CoeffSpec tables(std::vector<double> a, std::vector<double> b);

    double a(const BasePoint& w) const;
    double b(const BasePoint& w) const;

    bool is_harmonic() const { return harmonic_; }
    int table_size() const { return static_cast<int>(a_table_.size()); }

    double a0() const { return a0_; }
    double a1() const { return a1_; }
    double b0() const { return b0_; }
    double b1() const { return b1_; }
    const std::vector<double>& a_table() const { return a_table_; }
    const std::vector<double>& b_table() const { return b_table_; }

private:
    CoeffSpec() = default;

    bool harmonic_ = true;
    double a0_ = 0.0, a1_ = 0.0, b0_ = 0.0, b1_ = 0.0;
    std::vector<double> a_table_;
    std::vector<double> b_table_;
};

/// Quadrature rule against the invariant measure of the driver: uniform
/// angles for the rotation (Lebesgue), the uniform state distribution for
/// the telegraph.
struct InvariantQuadrature {
    std::vector<BasePoint> nodes;
    std::vector<double> weights;
};

InvariantQuadrature invariant_quadrature(const Flow& flow, int n);

/// weighted average of f over the quadrature nodes
template <typename F>
double quad_average(const InvariantQuadrature& quad, F&& f) {
    double acc = 0.0;
    for (std::size_t i = 0; i < quad.nodes.size(); ++i)
        acc += quad.weights[i] * f(quad.nodes[i]);
    return acc;
}

} // namespace floq
