#include "floq/linalg.hpp"

#include <cassert>
#include <cmath>

namespace floq {

std::vector<double> Matrix::apply(std::span<const double> x) const {
    assert(static_cast<int>(x.size()) == cols_);
    std::vector<double> y(static_cast<std::size_t>(rows_), 0.0);
    for (int i = 0; i < rows_; ++i) {
        const double* r = a_.data() + idx(i, 0);
        double acc = 0.0;
        for (int j = 0; j < cols_; ++j) acc += r[j] * x[static_cast<std::size_t>(j)];
        y[static_cast<std::size_t>(i)] = acc;
    }
    return y;
}

std::vector<double> Matrix::apply_transpose(std::span<const double> x) const {
    assert(static_cast<int>(x.size()) == rows_);
    std::vector<double> y(static_cast<std::size_t>(cols_), 0.0);
    for (int i = 0; i < rows_; ++i) {
        const double* r = a_.data() + idx(i, 0);
        const double xi = x[static_cast<std::size_t>(i)];
        for (int j = 0; j < cols_; ++j) y[static_cast<std::size_t>(j)] += r[j] * xi;
    }
    return y;
}

double Matrix::inf_norm() const {
    double best = 0.0;
    for (int i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (int j = 0; j < cols_; ++j) s += std::abs((*this)(i, j));
        best = std::max(best, s);
    }
    return best;
}

double Matrix::min_entry() const {
    double best = a_.empty() ? 0.0 : a_[0];
    for (double v : a_) best = std::min(best, v);
    return best;
}

void Matrix::scale(double s) {
    for (double& v : a_) v *= s;
}

Matrix operator*(const Matrix& lhs, const Matrix& rhs) {
    assert(lhs.cols() == rhs.rows());
    Matrix out(lhs.rows(), rhs.cols());
    for (int i = 0; i < lhs.rows(); ++i) {
        for (int k = 0; k < lhs.cols(); ++k) {
            const double v = lhs(i, k);
            if (v == 0.0) continue;
            for (int j = 0; j < rhs.cols(); ++j) out(i, j) += v * rhs(k, j);
        }
    }
    return out;
}

} // namespace floq
