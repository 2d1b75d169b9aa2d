#pragma once

#include <vector>

#include "floq/delay_cocycle.hpp"

namespace floq {

/// Discretized element of the dual space R x L_q: head functional value and
/// tail samples paired against the state through the quadrature weights.
struct DualVector {
    double head = 0.0;
    std::vector<double> tail;

    int points() const { return static_cast<int>(tail.size()); }
};

DualVector zero_dual(const GridSpec& g);

/// Dual reference functional (1, 1-constant tail): pairs to 1 against the
/// reference direction e and has dual norm exactly 1 for every q.
DualVector e_star(const GridSpec& g);

/// u.head v.head + sum_j w_j u.tail_j v.tail_j
double pairing(const StateVector& u, const DualVector& v, const GridSpec& g);

/// dual norm max(|head|, (sum_j w_j |tail_j|^q)^(1/q)); max form because the
/// state norm adds the head and tail parts
double dual_norm(const DualVector& v, const GridSpec& g);

bool in_dual_cone(const DualVector& v);

double dual_max_abs(const DualVector& v);
DualVector dual_scaled(const DualVector& v, double s);
double dual_proj_dist(const DualVector& u, const DualVector& v);

/// Adjoint of one forward unit step with respect to the quadrature pairing:
/// with W the diagonal weight matrix, W^{-1} A^T W for the unit propagator A
/// taken one unit into the past.
DualVector dual_unit_step(const DelayCocycle& sys, const BasePoint& w, const DualVector& v);

/// adjoint application of a precomputed forward matrix
DualVector dual_apply_matrix(const Matrix& forward, const DualVector& v, const GridSpec& g);

/// Dual semiflow at any grid-aligned time: the pairing-adjoint of the forward
/// map started t into the past, composed per the dual cocycle law.
DualVector dual_apply(const DelayCocycle& sys, const BasePoint& w, double t, const DualVector& v);

/// Bracket constants for the dual focusing property at the two-unit scale,
/// expressed through the forward bracket width two units into the past:
/// beta* = <e, v> / kappa, kappa* = kappa^2.
struct DualFocusing {
    double beta_star = 0.0;
    double kappa_star = 1.0;
};

DualFocusing dual_focusing_constants(const DelayCocycle& sys, const BasePoint& w,
                                     const DualVector& v);

} // namespace floq
