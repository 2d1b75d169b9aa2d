#pragma once

#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "floq/base_flow.hpp"
#include "floq/grid.hpp"
#include "floq/linalg.hpp"
#include "floq/state_space.hpp"

namespace floq {

/// Two-sided bracket of a positive image around the reference direction e:
/// beta * e <= U_w(2) u <= kappa * beta * e componentwise.
struct Focusing {
    double beta = 0.0;
    double kappa = 1.0;
};

/// Nonnegative matrix form of the one-unit solution operator on the
/// (head, tail) coordinates.
struct UnitPropagator {
    Matrix matrix;
    BasePoint source;
};

struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<double> heads;

    /// columns `t,z`, 17 significant digits
    void write_csv(std::ostream& os) const;
};

/// Linear skew-product semiflow of the scalar delay equation
///   z'(t) = a(driver_t) z(t) + b(driver_t) z(t - 1)
/// advanced by the method of steps. Each grid substep applies an exponential
/// integrator: the homogeneous factor is exp of a 2-point Gauss quadrature of
/// a over the substep, and the delayed forcing is sampled at the substep
/// midpoint through the nodal interpolant of the previous segment. All update
/// coefficients are nonnegative whenever b >= 0, so the cone is preserved,
/// and the unit delay equals m substeps exactly, so segment resampling is an
/// index shift. Times are restricted to the grid h * Z(>=0).
class DelayCocycle {
public:
    DelayCocycle(GridSpec grid, Flow flow, CoeffSpec coeffs);

    const GridSpec& grid() const { return grid_; }
    const Flow& flow() const { return flow_; }
    const CoeffSpec& coeffs() const { return coeffs_; }

    BasePoint shift(const BasePoint& w, double t) const;

    /// number of substeps for a grid-aligned time; rejects misaligned t
    int substeps_of(double t) const;

    StateVector integrate_unit(const BasePoint& w, const StateVector& u) const;
    StateVector apply(const BasePoint& w, double t, const StateVector& u) const;
    TrajectoryRecord trajectory(const BasePoint& w, double t, const StateVector& u) const;

    /// columns are the images of the coordinate basis vectors
    UnitPropagator unit_matrix(const BasePoint& w) const;
    Matrix step_matrix(const BasePoint& w, int substeps) const;

    /// Either the kernel branch (empty: the image at time 2 vanishes) or the
    /// bracket constants; the bracket then holds componentwise on the grid.
    std::optional<Focusing> focusing_constants(const BasePoint& w, const StateVector& u) const;

    /// bracket width kappa(w) alone; independent of the vector, always >= 1
    double kappa(const BasePoint& w) const;

    /// operator-norm bound 3 c(w) (1 + d(w)) valid for all grid times in [0, 1]
    double growth_bound(const BasePoint& w) const;

    static constexpr double kKernelTol = 1e-12;

private:
    struct Sample {
        double ia;   // 2-point Gauss integral of a over the substep
        double qa;   // same quadrature applied to |a|
        double bmid; // b at the substep midpoint
    };

    std::vector<Sample> sample_coeffs(const BasePoint& w, int substeps) const;

    // {kappa, min over second-unit grid points of exp(cumulative a)}
    std::pair<double, double> bracket_constants(const std::vector<Sample>& samples) const;

    // z values at grid times 0..substeps, starting from zs[0] = head
    std::vector<double> evolve(const std::vector<Sample>& samples,
                               const StateVector& u) const;

    StateVector output_state(const std::vector<double>& zs, const StateVector& u,
                             int substeps) const;

    GridSpec grid_;
    Flow flow_;
    CoeffSpec coeffs_;
};

} // namespace floq
