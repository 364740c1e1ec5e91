#pragma once

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace noma {

/// Dense column-major matrix of doubles.
///
/// Rate, power and gain tables are stored as (rank or user) x subcarrier, so
/// a column is everything that happens on one subcarrier and is contiguous.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double& operator()(std::size_t i, std::size_t j) {
        assert(i < rows_ && j < cols_);
        return data_[j * rows_ + i];
    }
    double operator()(std::size_t i, std::size_t j) const {
        assert(i < rows_ && j < cols_);
        return data_[j * rows_ + i];
    }

    std::span<double> col(std::size_t j) { return {data_.data() + j * rows_, rows_}; }
    std::span<const double> col(std::size_t j) const {
        return {data_.data() + j * rows_, rows_};
    }

    std::span<double> flat() { return data_; }
    std::span<const double> flat() const { return data_; }

    void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

namespace linalg {

// In-place Cholesky of a symmetric positive definite n x n row-major matrix.
// On success the lower triangle holds L with A = L L^T; returns false if a
// pivot is not positive.
bool cholesky_factor(std::span<double> a, std::size_t n);

// Solves L L^T x = b in place using a factor from cholesky_factor.
void cholesky_solve(std::span<const double> l, std::size_t n, std::span<double> b);

// Overwrites `inv` (n x n row-major) with A^{-1} from the Cholesky factor.
void cholesky_inverse(std::span<const double> l, std::size_t n, std::span<double> inv);

}  // namespace linalg
}  // namespace noma
