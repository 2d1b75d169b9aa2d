#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace floq {

/// Dense row-major matrix sized for propagator work on the (head, tail)
/// coordinate block; dimensions stay in the low hundreds.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols)
        : rows_(rows), cols_(cols),
          a_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0.0) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int i, int j) { return a_[idx(i, j)]; }
    double operator()(int i, int j) const { return a_[idx(i, j)]; }

    std::span<const double> row(int i) const {
        return {a_.data() + idx(i, 0), static_cast<std::size_t>(cols_)};
    }

    std::vector<double> apply(std::span<const double> x) const;
    std::vector<double> apply_transpose(std::span<const double> x) const;

    /// max absolute row sum
    double inf_norm() const;
    double min_entry() const;
    void scale(double s);

private:
    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) +
               static_cast<std::size_t>(j);
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> a_;
};

Matrix operator*(const Matrix& lhs, const Matrix& rhs);

} // namespace floq
