#pragma once

#include <cstddef>
#include <vector>

#include "regime/errors.hpp"

namespace regime {

// Dense row-major matrix of doubles. Sized for this library's needs
// (time series columns, small covariance blocks), not a linear algebra kit.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const double* row(std::size_t i) const { return data_.data() + i * cols_; }
    double* row(std::size_t i) { return data_.data() + i * cols_; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    bool operator==(const Matrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Lower-triangular Cholesky factor of a symmetric positive-definite matrix.
// Throws ParameterError if the matrix is not positive definite.
Matrix cholesky(const Matrix& a);

// Column means of an n x d matrix (population convention throughout).
std::vector<double> column_means(const Matrix& m);

// Population covariance matrix (d x d) of an n x d sample.
Matrix covariance(const Matrix& m);

}  // namespace regime
