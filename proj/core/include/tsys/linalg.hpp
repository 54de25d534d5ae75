#pragma once

#include <vector>

#include "tsys/errors.hpp"

namespace tsys {

/// Minimal dense row-major matrix; just enough for the small square and
/// least-squares systems this library solves.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, 0.0) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

struct DetResult {
    double value;
    /// Hadamard-style magnitude reference: product of row Euclidean norms.
    /// |value| <= scale always; sign calls use |value| relative to scale.
    double scale;
};

/// Determinant by Gaussian elimination with partial pivoting.
DetResult determinant(Matrix m);

/// Solves the square system a x = rhs by partially pivoted LU.
/// Throws SingularMatrixError when a pivot collapses.
std::vector<double> solve_linear(Matrix a, std::vector<double> rhs);

/// Least-squares solution of a x ~ rhs (rows >= cols) by Householder QR.
/// Throws SingularMatrixError when a is numerically rank deficient.
std::vector<double> solve_least_squares(Matrix a, std::vector<double> rhs);

}  // namespace tsys
