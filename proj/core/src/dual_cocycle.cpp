#include "floq/dual_cocycle.hpp"

#include <cmath>
#include <stdexcept>

namespace floq {

DualVector zero_dual(const GridSpec& g) {
    return {0.0, std::vector<double>(static_cast<std::size_t>(g.points()), 0.0)};
}

DualVector e_star(const GridSpec& g) {
    return {1.0, std::vector<double>(static_cast<std::size_t>(g.points()), 1.0)};
}

double pairing(const StateVector& u, const DualVector& v, const GridSpec& g) {
    if (u.points() != g.points() || v.points() != g.points())
        throw std::invalid_argument("pairing: grid mismatch");
    double acc = u.head * v.head;
    for (int j = 0; j < g.points(); ++j)
        acc += g.weight(j) * u.tail[static_cast<std::size_t>(j)] *
               v.tail[static_cast<std::size_t>(j)];
    return acc;
}

double dual_norm(const DualVector& v, const GridSpec& g) {
    if (v.points() != g.points())
        throw std::invalid_argument("dual_norm: grid mismatch");
    const double q = g.q();
    double s = 0.0;
    if (std::isinf(q)) {
        for (double t : v.tail) s = std::max(s, std::abs(t));
    } else if (q == 2.0) {
        for (int j = 0; j < g.points(); ++j) {
            const double t = v.tail[static_cast<std::size_t>(j)];
            s += g.weight(j) * t * t;
        }
        s = std::sqrt(s);
    } else {
        for (int j = 0; j < g.points(); ++j)
            s += g.weight(j) * std::pow(std::abs(v.tail[static_cast<std::size_t>(j)]), q);
        s = std::pow(s, 1.0 / q);
    }
    return std::max(std::abs(v.head), s);
}

bool in_dual_cone(const DualVector& v) {
    double cut = 0.0;
    for (double t : v.tail) cut = std::max(cut, std::abs(t));
    cut = kZeroTol * std::max(1.0, std::max(cut, std::abs(v.head)));
    if (v.head < -cut) return false;
    for (double t : v.tail)
        if (t < -cut) return false;
    return true;
}

double dual_max_abs(const DualVector& v) {
    double best = std::abs(v.head);
    for (double t : v.tail) best = std::max(best, std::abs(t));
    return best;
}

DualVector dual_scaled(const DualVector& v, double s) {
    DualVector out = v;
    out.head *= s;
    for (double& t : out.tail) t *= s;
    return out;
}

double dual_proj_dist(const DualVector& u, const DualVector& v) {
    std::vector<double> cu, cv;
    cu.reserve(u.tail.size() + 1);
    cv.reserve(v.tail.size() + 1);
    cu.push_back(u.head);
    cu.insert(cu.end(), u.tail.begin(), u.tail.end());
    cv.push_back(v.head);
    cv.insert(cv.end(), v.tail.begin(), v.tail.end());
    return gauge_coords(cu, cv).dist;
}

DualVector dual_apply_matrix(const Matrix& forward, const DualVector& v, const GridSpec& g) {
    // W^{-1} A^T W v
    std::vector<double> x(static_cast<std::size_t>(g.dim()));
    x[0] = v.head;
    for (int j = 0; j < g.points(); ++j)
        x[static_cast<std::size_t>(j) + 1] =
            g.weight(j) * v.tail[static_cast<std::size_t>(j)];
    const auto y = forward.apply_transpose(x);
    DualVector out;
    out.head = y[0];
    out.tail.resize(static_cast<std::size_t>(g.points()));
    for (int j = 0; j < g.points(); ++j)
        out.tail[static_cast<std::size_t>(j)] =
            y[static_cast<std::size_t>(j) + 1] / g.weight(j);
    return out;
}

DualVector dual_unit_step(const DelayCocycle& sys, const BasePoint& w, const DualVector& v) {
    const Matrix fwd = sys.step_matrix(sys.shift(w, -1.0), sys.grid().m());
    return dual_apply_matrix(fwd, v, sys.grid());
}

DualVector dual_apply(const DelayCocycle& sys, const BasePoint& w, double t,
                      const DualVector& v) {
    if (v.points() != sys.grid().points())
        throw std::invalid_argument("dual_apply: grid mismatch");
    const int nsub = sys.substeps_of(t);
    const int m = sys.grid().m();
    const int units = nsub / m;
    const int rem = nsub % m;
    const double h = sys.grid().step();

    DualVector out = v;
    // adjoint of the forward composition, applied in reverse factor order:
    // the fractional leg ends at w, the unit legs reach back from there
    if (rem > 0) {
        const BasePoint base = sys.shift(w, -h * static_cast<double>(rem));
        out = dual_apply_matrix(sys.step_matrix(base, rem), out, sys.grid());
    }
    for (int j = 1; j <= units; ++j) {
        const BasePoint base =
            sys.shift(w, -h * static_cast<double>(rem) - static_cast<double>(j));
        out = dual_apply_matrix(sys.step_matrix(base, m), out, sys.grid());
    }
    return out;
}

DualFocusing dual_focusing_constants(const DelayCocycle& sys, const BasePoint& w,
                                     const DualVector& v) {
    if (!in_dual_cone(v))
        throw std::invalid_argument("dual_focusing_constants: vector must lie in the dual cone");
    if (dual_max_abs(v) == 0.0)
        throw std::invalid_argument("dual_focusing_constants: zero vector");
    const double kap = sys.kappa(sys.shift(w, -2.0));
    const double pe = pairing(e_vector(sys.grid()), v, sys.grid());
    return DualFocusing{pe / kap, kap * kap};
}

} // namespace floq
