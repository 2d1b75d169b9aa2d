#include "floq/grid.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace floq {

GridSpec::GridSpec(int m, double p) : m_(m), p_(p) {
    if (m < 1) throw std::invalid_argument("GridSpec: m must be >= 1");
    if (!(p >= 1.0) || !std::isfinite(p))
        throw std::invalid_argument("GridSpec: p must be a finite real >= 1");
    h_ = 1.0 / static_cast<double>(m);
    q_ = (p == 1.0) ? std::numeric_limits<double>::infinity() : p / (p - 1.0);
    weights_.assign(static_cast<std::size_t>(m + 1), h_);
    weights_.front() = 0.5 * h_;
    weights_.back() = 0.5 * h_;
}

} // namespace floq
