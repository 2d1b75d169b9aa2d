#include "floq/delay_cocycle.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace floq {

namespace {

double frac(double x) { return x - std::floor(x); }

} // namespace

void TrajectoryRecord::write_csv(std::ostream& os) const {
    os << "t,z\n";
    char buf[64];
    for (std::size_t i = 0; i < times.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", times[i], heads[i]);
        os << buf;
    }
}

DelayCocycle::DelayCocycle(GridSpec grid, Flow flow, CoeffSpec coeffs)
    : grid_(grid), flow_(std::move(flow)), coeffs_(std::move(coeffs)) {
    if (std::holds_alternative<TorusFlow>(flow_)) {
        if (!coeffs_.is_harmonic())
            throw std::invalid_argument(
                "DelayCocycle: torus driver needs harmonic coefficients");
    } else {
        const auto& f = std::get<TelegraphFlow>(flow_);
        if (coeffs_.is_harmonic())
            throw std::invalid_argument(
                "DelayCocycle: telegraph driver needs coefficient tables");
        if (coeffs_.table_size() != f.states)
            throw std::invalid_argument(
                "DelayCocycle: coefficient table size must match the state count");
        if (std::abs(f.tick - grid_.step()) > 1e-12)
            throw std::invalid_argument(
                "DelayCocycle: telegraph tick must equal the grid step");
    }
}

BasePoint DelayCocycle::shift(const BasePoint& w, double t) const {
    return advance(flow_, w, t);
}

int DelayCocycle::substeps_of(double t) const {
    const double r = t * static_cast<double>(grid_.m());
    const double k = std::round(r);
    if (k < 0.0 || std::abs(r - k) > 1e-9 * std::max(1.0, std::abs(r)))
        throw std::invalid_argument(
            "DelayCocycle: time must be a nonnegative multiple of the grid step");
    return static_cast<int>(k);
}

std::vector<DelayCocycle::Sample>
DelayCocycle::sample_coeffs(const BasePoint& w, int substeps) const {
    std::vector<Sample> out(static_cast<std::size_t>(substeps));
    const double h = grid_.step();
    const double gauss_off = 0.5 * h / std::sqrt(3.0);

    if (std::holds_alternative<TorusFlow>(flow_)) {
        const double gamma = std::get<TorusFlow>(flow_).gamma;
        const double x0 = std::get<TorusPoint>(w).angle;
        for (int g = 0; g < substeps; ++g) {
            const double tmid = (static_cast<double>(g) + 0.5) * h;
            const TorusPoint p1{frac(x0 + gamma * (tmid - gauss_off))};
            const TorusPoint p2{frac(x0 + gamma * (tmid + gauss_off))};
            const double a1 = coeffs_.a(p1);
            const double a2 = coeffs_.a(p2);
            auto& s = out[static_cast<std::size_t>(g)];
            s.ia = 0.5 * h * (a1 + a2);
            s.qa = 0.5 * h * (std::abs(a1) + std::abs(a2));
            s.bmid = coeffs_.b(TorusPoint{frac(x0 + gamma * tmid)});
        }
        return out;
    }

    // Telegraph coefficients are constant on each tick and the tick equals
    // the substep, so the quadratures are exact; walk the state one tick at
    // a time to keep evaluation O(1) per substep.
    const double h_tick = h;
    BasePoint p = w;
    for (int g = 0; g < substeps; ++g) {
        const double a = coeffs_.a(p);
        auto& s = out[static_cast<std::size_t>(g)];
        s.ia = h_tick * a;
        s.qa = h_tick * std::abs(a);
        s.bmid = coeffs_.b(p);
        p = advance(flow_, p, h_tick);
    }
    return out;
}

std::vector<double> DelayCocycle::evolve(const std::vector<Sample>& samples,
                                         const StateVector& u) const {
    const int m = grid_.m();
    const double h = grid_.step();
    const int nsub = static_cast<int>(samples.size());
    std::vector<double> zs(static_cast<std::size_t>(nsub) + 1);
    zs[0] = u.head;
    for (int g = 0; g < nsub; ++g) {
        const auto& s = samples[static_cast<std::size_t>(g)];
        // delayed segment value at the substep midpoint: nodal interpolant of
        // the previous segment, which is the initial tail during the first
        // unit and the computed solution afterwards
        double lagged;
        if (g <= m - 1)
            lagged = 0.5 * (u.tail[static_cast<std::size_t>(g)] +
                            u.tail[static_cast<std::size_t>(g) + 1]);
        else
            lagged = 0.5 * (zs[static_cast<std::size_t>(g - m)] +
                            zs[static_cast<std::size_t>(g - m) + 1]);
        zs[static_cast<std::size_t>(g) + 1] =
            std::exp(s.ia) * zs[static_cast<std::size_t>(g)] +
            h * std::exp(0.5 * s.ia) * s.bmid * lagged;
    }
    return zs;
}

StateVector DelayCocycle::output_state(const std::vector<double>& zs,
                                       const StateVector& u, int substeps) const {
    const int m = grid_.m();
    StateVector out;
    out.head = zs[static_cast<std::size_t>(substeps)];
    out.tail.resize(static_cast<std::size_t>(m) + 1);
    for (int i = 0; i <= m; ++i) {
        const int g = substeps + i; // node at time (substeps + i) h - 1
        out.tail[static_cast<std::size_t>(i)] =
            (g <= m - 1) ? u.tail[static_cast<std::size_t>(g)]
                         : zs[static_cast<std::size_t>(g - m)];
    }
    return out;
}

StateVector DelayCocycle::integrate_unit(const BasePoint& w, const StateVector& u) const {
    const int m = grid_.m();
    if (u.points() != grid_.points())
        throw std::invalid_argument("integrate_unit: state size does not match grid");
    const auto samples = sample_coeffs(w, m);
    const auto zs = evolve(samples, u);
    return output_state(zs, u, m);
}

StateVector DelayCocycle::apply(const BasePoint& w, double t, const StateVector& u) const {
    if (u.points() != grid_.points())
        throw std::invalid_argument("apply: state size does not match grid");
    const int nsub = substeps_of(t);
    if (nsub == 0) return u;
    const auto samples = sample_coeffs(w, nsub);
    const auto zs = evolve(samples, u);
    return output_state(zs, u, nsub);
}

TrajectoryRecord DelayCocycle::trajectory(const BasePoint& w, double t,
                                          const StateVector& u) const {
    if (u.points() != grid_.points())
        throw std::invalid_argument("trajectory: state size does not match grid");
    const int nsub = substeps_of(t);
    const auto samples = sample_coeffs(w, nsub);
    const auto zs = evolve(samples, u);
    TrajectoryRecord rec;
    rec.times.resize(zs.size());
    rec.heads = zs;
    const double h = grid_.step();
    for (std::size_t i = 0; i < zs.size(); ++i)
        rec.times[i] = h * static_cast<double>(i);
    return rec;
}

Matrix DelayCocycle::step_matrix(const BasePoint& w, int substeps) const {
    const int dim = grid_.dim();
    const auto samples = sample_coeffs(w, substeps);
    Matrix out(dim, dim);
    StateVector basis = zero_state(grid_);
    for (int j = 0; j < dim; ++j) {
        if (j == 0)
            basis.head = 1.0;
        else
            basis.tail[static_cast<std::size_t>(j - 1)] = 1.0;
        const auto zs = evolve(samples, basis);
        const StateVector col = output_state(zs, basis, substeps);
        out(0, j) = col.head;
        for (int i = 0; i < grid_.points(); ++i)
            out(i + 1, j) = col.tail[static_cast<std::size_t>(i)];
        if (j == 0)
            basis.head = 0.0;
        else
            basis.tail[static_cast<std::size_t>(j - 1)] = 0.0;
    }
    return out;
}

UnitPropagator DelayCocycle::unit_matrix(const BasePoint& w) const {
    return UnitPropagator{step_matrix(w, grid_.m()), w};
}

// Bracket constants from the two-unit coefficient samples. The solution value
// at any second-unit grid point sits between exp(cumulative) z(1) and
// kappa * min(exp(cumulative)) z(1): the lower factor is the homogeneous part
// alone, the upper one bounds every delayed first-unit value through the
// monotonicity of z(t) exp(-integral of a).
std::pair<double, double>
DelayCocycle::bracket_constants(const std::vector<Sample>& samples) const {
    const int m = grid_.m();
    const double h = grid_.step();
    std::vector<double> A(static_cast<std::size_t>(m) + 1, 0.0);
    std::vector<double> B(static_cast<std::size_t>(m) + 1, 0.0);
    double qsum = 0.0;
    for (int i = 0; i < m; ++i) {
        A[static_cast<std::size_t>(i) + 1] =
            A[static_cast<std::size_t>(i)] + samples[static_cast<std::size_t>(i)].ia;
        const auto& s2 = samples[static_cast<std::size_t>(m + i)];
        B[static_cast<std::size_t>(i) + 1] = B[static_cast<std::size_t>(i)] + s2.ia;
        qsum += s2.qa;
    }
    const double A1 = A[static_cast<std::size_t>(m)];
    double forcing = 0.0;
    for (int k = 0; k < m; ++k) {
        const auto& s2 = samples[static_cast<std::size_t>(m + k)];
        const double lag_bound = 0.5 * (std::exp(A[static_cast<std::size_t>(k)] - A1) +
                                        std::exp(A[static_cast<std::size_t>(k) + 1] - A1));
        forcing += h * s2.bmid *
                   std::exp(-B[static_cast<std::size_t>(k)] - 0.5 * s2.ia) * lag_bound;
    }
    double min_exp = 1.0;
    for (int j = 0; j <= m; ++j)
        min_exp = std::min(min_exp, std::exp(B[static_cast<std::size_t>(j)]));
    return {std::exp(qsum) * (1.0 + forcing), min_exp};
}

std::optional<Focusing> DelayCocycle::focusing_constants(const BasePoint& w,
                                                         const StateVector& u) const {
    if (!in_cone(u))
        throw std::invalid_argument("focusing_constants: vector must lie in the cone");
    const int m = grid_.m();
    const auto samples = sample_coeffs(w, 2 * m);
    const auto zs = evolve(samples, u);

    const double z1 = zs[static_cast<std::size_t>(m)];
    if (z1 <= kKernelTol * norm_x(u, grid_))
        return std::nullopt; // annihilated by time 2

    const auto [kap, min_exp_second] = bracket_constants(samples);
    return Focusing{2.0 * min_exp_second * z1, kap};
}

double DelayCocycle::kappa(const BasePoint& w) const {
    return bracket_constants(sample_coeffs(w, 2 * grid_.m())).first;
}

double DelayCocycle::growth_bound(const BasePoint& w) const {
    const int m = grid_.m();
    const double h = grid_.step();
    const auto samples = sample_coeffs(w, m);
    double qsum = 0.0;
    for (const auto& s : samples) qsum += s.qa;
    const double c = std::exp(qsum);

    const double q = grid_.q();
    double d = 0.0;
    if (std::isinf(q)) {
        for (const auto& s : samples) d = std::max(d, s.bmid);
    } else {
        for (const auto& s : samples) d += h * std::pow(s.bmid, q);
        d = std::pow(d, 1.0 / q);
    }
    return 3.0 * c * (1.0 + d);
}

} // namespace floq
