#include "floq/state_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace floq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

} // namespace

StateVector zero_state(const GridSpec& g) {
    return {0.0, std::vector<double>(static_cast<std::size_t>(g.points()), 0.0)};
}

StateVector const_state(const GridSpec& g, double head, double tail_value) {
    return {head, std::vector<double>(static_cast<std::size_t>(g.points()), tail_value)};
}

StateVector e_vector(const GridSpec& g) {
    return const_state(g, 0.5, 0.5);
}

StateVector scaled(const StateVector& u, double s) {
    StateVector out = u;
    out.head *= s;
    for (double& t : out.tail) t *= s;
    return out;
}

StateVector add(const StateVector& u, const StateVector& v) {
    StateVector out = u;
    out.head += v.head;
    for (std::size_t j = 0; j < out.tail.size(); ++j) out.tail[j] += v.tail[j];
    return out;
}

StateVector sub(const StateVector& u, const StateVector& v) {
    StateVector out = u;
    out.head -= v.head;
    for (std::size_t j = 0; j < out.tail.size(); ++j) out.tail[j] -= v.tail[j];
    return out;
}

std::vector<double> to_coords(const StateVector& u) {
    std::vector<double> c;
    c.reserve(u.tail.size() + 1);
    c.push_back(u.head);
    c.insert(c.end(), u.tail.begin(), u.tail.end());
    return c;
}

StateVector from_coords(const GridSpec& g, std::span<const double> c) {
    if (static_cast<int>(c.size()) != g.dim())
        throw std::invalid_argument("from_coords: coordinate count does not match grid");
    StateVector u;
    u.head = c[0];
    u.tail.assign(c.begin() + 1, c.end());
    return u;
}

double max_abs(const StateVector& u) {
    double best = std::abs(u.head);
    for (double t : u.tail) best = std::max(best, std::abs(t));
    return best;
}

bool is_finite(const StateVector& u) {
    if (!std::isfinite(u.head)) return false;
    return std::all_of(u.tail.begin(), u.tail.end(),
                       [](double t) { return std::isfinite(t); });
}

double norm_x(const StateVector& u, const GridSpec& g) {
    if (static_cast<int>(u.tail.size()) != g.points())
        throw std::invalid_argument("norm_x: tail size does not match grid");
    const double p = g.p();
    double s = 0.0;
    if (p == 2.0) {
        for (int j = 0; j < g.points(); ++j) {
            const double t = u.tail[static_cast<std::size_t>(j)];
            s += g.weight(j) * t * t;
        }
        s = std::sqrt(s);
    } else if (p == 1.0) {
        for (int j = 0; j < g.points(); ++j)
            s += g.weight(j) * std::abs(u.tail[static_cast<std::size_t>(j)]);
    } else {
        for (int j = 0; j < g.points(); ++j)
            s += g.weight(j) * std::pow(std::abs(u.tail[static_cast<std::size_t>(j)]), p);
        s = std::pow(s, 1.0 / p);
    }
    return std::abs(u.head) + s;
}

StateVector clamped(const StateVector& u) {
    const double cut = kZeroTol * std::max(1.0, max_abs(u));
    StateVector out = u;
    if (std::abs(out.head) <= cut) out.head = 0.0;
    for (double& t : out.tail)
        if (std::abs(t) <= cut) t = 0.0;
    return out;
}

bool in_cone(const StateVector& u) {
    const double cut = kZeroTol * std::max(1.0, max_abs(u));
    if (u.head < -cut) return false;
    for (double t : u.tail)
        if (t < -cut) return false;
    return true;
}

ProjectiveGauge gauge_coords(std::span<const double> u, std::span<const double> v) {
    bool v_nonzero = false;
    bool support_excess = false; // some u_i > 0 where v_i = 0
    double lo = kInf;
    double hi = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (v[i] > 0.0) {
            v_nonzero = true;
            const double r = u[i] / v[i];
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        } else if (u[i] > 0.0) {
            support_excess = true;
        }
    }
    if (!v_nonzero) throw std::invalid_argument("gauge: v is the zero vector");

    ProjectiveGauge out;
    out.m_ratio = lo;
    out.M_ratio = support_excess ? kInf : hi;
    out.osc = (out.M_ratio == kInf) ? kInf : out.M_ratio - out.m_ratio;
    if (out.m_ratio > 0.0 && out.M_ratio < kInf)
        out.dist = std::log(out.M_ratio / out.m_ratio);
    else
        out.dist = kInf;
    return out;
}

ProjectiveGauge gauge(const StateVector& u, const StateVector& v) {
    if (u.tail.size() != v.tail.size())
        throw std::invalid_argument("gauge: tail sizes differ");
    if (!in_cone(u) || !in_cone(v))
        throw std::invalid_argument("gauge: inputs must lie in the cone");
    const auto cu = to_coords(clamped(u));
    const auto cv = to_coords(clamped(v));
    return gauge_coords(cu, cv);
}

bool comparable(const StateVector& u, const StateVector& v) {
    const StateVector cu = clamped(u);
    const StateVector cv = clamped(v);
    if (!in_cone(cu) || !in_cone(cv))
        throw std::invalid_argument("comparable: inputs must lie in the cone");
    if (max_abs(cu) == 0.0 || max_abs(cv) == 0.0)
        throw std::invalid_argument("comparable: zero vector");
    if ((cu.head > 0.0) != (cv.head > 0.0)) return false;
    for (std::size_t j = 0; j < cu.tail.size(); ++j)
        if ((cu.tail[j] > 0.0) != (cv.tail[j] > 0.0)) return false;
    return true;
}

double proj_dist(const StateVector& u, const StateVector& v) {
    return gauge(u, v).dist;
}

std::pair<double, double> projdist_norm_bound(const StateVector& u,
                                              const StateVector& v,
                                              const GridSpec& g) {
    if (!comparable(u, v))
        throw std::invalid_argument("projdist_norm_bound: inputs are not comparable");
    if (std::abs(norm_x(u, g) - 1.0) > 1e-9 || std::abs(norm_x(v, g) - 1.0) > 1e-9)
        throw std::invalid_argument("projdist_norm_bound: inputs must be unit vectors");
    const double lhs = norm_x(sub(u, v), g);
    const double rhs = 3.0 * std::expm1(gauge(u, v).dist);
    return {lhs, rhs};
}

} // namespace floq
