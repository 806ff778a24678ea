#pragma once

#include <cstddef>
#include <vector>

namespace specforge {

/// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);

std::vector<double> matvec(const Matrix& a, const std::vector<double>& x);
double frobenius_norm(const Matrix& a);
double symmetry_defect(const Matrix& a); // ||A - A^T||_F

/// Cyclic Jacobi rotations for a symmetric matrix; eigenvalues ascending,
/// optional orthonormal eigenvector columns.
void jacobi_eigensystem(const Matrix& a, std::vector<double>& values,
                        Matrix* vectors = nullptr, int max_sweeps = 100);

/// Solve A x = b by LU with partial pivoting (A square, well-conditioned
/// by the callers' own admission checks).
std::vector<double> lu_solve(Matrix a, std::vector<double> b);

Matrix lu_invert(const Matrix& a);

} // namespace specforge
