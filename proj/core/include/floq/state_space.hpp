#pragma once

#include <span>
#include <utility>
#include <vector>

#include "floq/grid.hpp"

namespace floq {

/// Relative tolerance below which a coordinate counts as zero in cone and
/// support decisions.
inline constexpr double kZeroTol = 1e-12;

/// Discretized element of R x L_p([-1,0]): a head scalar and tail samples
/// at the grid nodes.
struct StateVector {
    double head = 0.0;
    std::vector<double> tail;

    int points() const { return static_cast<int>(tail.size()); }
};

StateVector zero_state(const GridSpec& g);
StateVector const_state(const GridSpec& g, double head, double tail_value);

/// Strictly positive unit vector (1/2, 1/2-constant tail) used as the
/// focusing reference direction; its norm is exactly 1 for every p.
StateVector e_vector(const GridSpec& g);

StateVector scaled(const StateVector& u, double s);
StateVector add(const StateVector& u, const StateVector& v);
StateVector sub(const StateVector& u, const StateVector& v);

std::vector<double> to_coords(const StateVector& u);
StateVector from_coords(const GridSpec& g, std::span<const double> c);

double max_abs(const StateVector& u);
bool is_finite(const StateVector& u);

/// |head| + (sum_j w_j |tail_j|^p)^(1/p)
double norm_x(const StateVector& u, const GridSpec& g);

/// Coordinatewise zero-clamp: entries within kZeroTol * max(1, max_abs)
/// of zero are set to 0.
StateVector clamped(const StateVector& u);

/// Membership in the positive cone, up to the zero tolerance.
bool in_cone(const StateVector& u);

/// Two-sided multiple bounds of u over v along with the induced oscillation
/// and projective distance. Ratios are taken coordinatewise over the
/// (head, tail) block; dist is +inf when the supports differ.
struct ProjectiveGauge {
    double m_ratio = 0.0;
    double M_ratio = 0.0;
    double osc = 0.0;
    double dist = 0.0;
};

ProjectiveGauge gauge(const StateVector& u, const StateVector& v);

/// gauge over raw coordinate vectors (shared with the dual side)
ProjectiveGauge gauge_coords(std::span<const double> u, std::span<const double> v);

/// true iff u and v lie in the same cone component (identical supports after
/// zero-clamping); both must be nonzero cone vectors.
bool comparable(const StateVector& u, const StateVector& v);

double proj_dist(const StateVector& u, const StateVector& v);

/// For comparable unit vectors returns (|u - v|_X, 3(e^{d(u,v)} - 1)); the
/// first component never exceeds the second.
std::pair<double, double> projdist_norm_bound(const StateVector& u,
                                              const StateVector& v,
                                              const GridSpec& g);

} // namespace floq
