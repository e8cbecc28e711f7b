#pragma once

#include <cstddef>
#include <vector>

namespace hcsf {

using Vec = std::vector<double>;

// Dense row-major matrix of doubles. Everything in this project is tiny
// (a few dozen rows at most), so no attempt is made at blocking or views.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    bool operator==(const Matrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);
Matrix transpose(const Matrix& a);

// y = A x
Vec matvec(const Matrix& a, const Vec& x);
// y = A^T x
Vec matvec_t(const Matrix& a, const Vec& x);

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& a);
Vec scaled(const Vec& a, double s);
Vec vec_add(const Vec& a, const Vec& b);
Vec vec_sub(const Vec& a, const Vec& b);

double frobenius_norm(const Matrix& a);
double max_abs(const Matrix& a);

}  // namespace hcsf
