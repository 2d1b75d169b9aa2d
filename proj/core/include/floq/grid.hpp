#pragma once

#include <vector>

namespace floq {

/// Uniform grid on the delay interval [-1, 0] together with the Lebesgue
/// exponent of the segment space. Nodes are s_j = -1 + j/m for j = 0..m;
/// quadrature weights are the trapezoid weights, so they are strictly
/// positive and sum to the interval length 1. The conjugate exponent q
/// satisfies 1/p + 1/q = 1 (q = +inf when p = 1).
class GridSpec {
public:
    GridSpec(int m, double p);

    int m() const { return m_; }
    double p() const { return p_; }
    double q() const { return q_; }
    double step() const { return h_; }

    /// number of tail nodes (m + 1)
    int points() const { return m_ + 1; }
    /// head + tail coordinate count (m + 2)
    int dim() const { return m_ + 2; }

    double node(int j) const { return -1.0 + h_ * static_cast<double>(j); }
    double weight(int j) const { return weights_[static_cast<std::size_t>(j)]; }
    const std::vector<double>& weights() const { return weights_; }

    bool same_grid(const GridSpec& other) const {
        return m_ == other.m_ && p_ == other.p_;
    }

private:
    int m_;
    double p_;
    double q_;
    double h_;
    std::vector<double> weights_;
};

} // namespace floq
