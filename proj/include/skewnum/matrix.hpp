#pragma once

#include <complex>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace skewnum {

using Complex = std::complex<double>;

/// Dense square complex matrix, row-major. General-purpose value type for
/// everything that is not guaranteed Hermitian (commutators, products,
/// unitary eigenvector matrices).
class Matrix {
public:
    Matrix() = default;

    explicit Matrix(int dim)
        : dim_(dim), data_(checked_size(dim)) {}

    static Matrix zero(int dim) { return Matrix(dim); }

    static Matrix identity(int dim) {
        Matrix m(dim);
        for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    /// Build from nested rows; throws on ragged input.
    static Matrix from_rows(const std::vector<std::vector<Complex>>& rows) {
        const int n = static_cast<int>(rows.size());
        Matrix m(n);
        for (int i = 0; i < n; ++i) {
            if (static_cast<int>(rows[i].size()) != n)
                throw std::invalid_argument("Matrix::from_rows: row " + std::to_string(i) +
                                            " has wrong length");
            for (int j = 0; j < n; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    static Matrix from_real(const std::vector<std::vector<double>>& rows) {
        const int n = static_cast<int>(rows.size());
        Matrix m(n);
        for (int i = 0; i < n; ++i) {
            if (static_cast<int>(rows[i].size()) != n)
                throw std::invalid_argument("Matrix::from_real: row " + std::to_string(i) +
                                            " has wrong length");
            for (int j = 0; j < n; ++j) m(i, j) = Complex(rows[i][j], 0.0);
        }
        return m;
    }

    int dim() const { return dim_; }

    Complex& operator()(int i, int j) { return data_[static_cast<size_t>(i) * dim_ + j]; }
    const Complex& operator()(int i, int j) const {
        return data_[static_cast<size_t>(i) * dim_ + j];
    }

    Matrix adjoint() const {
        Matrix r(dim_);
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) r(j, i) = std::conj((*this)(i, j));
        return r;
    }

    Complex trace() const {
        Complex t = 0.0;
        for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
        return t;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& z : data_) m = std::max(m, std::abs(z));
        return m;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& z : data_) s += std::norm(z);
        return std::sqrt(s);
    }

    bool is_hermitian(double tol) const {
        for (int i = 0; i < dim_; ++i)
            for (int j = i; j < dim_; ++j)
                if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
        return true;
    }

    Matrix& operator+=(const Matrix& o) {
        require_same_dim(o);
        for (size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }

    Matrix& operator-=(const Matrix& o) {
        require_same_dim(o);
        for (size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }

    Matrix& operator*=(Complex c) {
        for (auto& z : data_) z *= c;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, Complex c) { return a *= c; }
    friend Matrix operator*(Complex c, Matrix a) { return a *= c; }
    friend Matrix operator-(Matrix a) { return a *= Complex(-1.0, 0.0); }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        a.require_same_dim(b);
        const int n = a.dim_;
        Matrix c(n);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                const Complex aik = a(i, k);
                if (aik == Complex{}) continue;
                for (int j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }

private:
    static size_t checked_size(int dim) {
        if (dim < 0) throw std::invalid_argument("Matrix: negative dimension");
        return static_cast<size_t>(dim) * static_cast<size_t>(dim);
    }

    void require_same_dim(const Matrix& o) const {
        if (dim_ != o.dim_) throw std::invalid_argument("Matrix: dimension mismatch");
    }

    int dim_ = 0;
    std::vector<Complex> data_;
};

/// tr(a·b) without forming the product.
inline Complex trace_product(const Matrix& a, const Matrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("trace_product: dimension mismatch");
    Complex t = 0.0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) t += a(i, j) * b(j, i);
    return t;
}

/// Square complex matrix asserted Hermitian at construction. Construction
/// symmetrizes via (A + A*)/2 after checking the asymmetry stays below
/// 1e-12 times the largest entry. Immutable afterwards, so values can be
/// shared freely across threads.
class HermitianMatrix {
public:
    static constexpr double kHermiticityRelTol = 1e-12;

    explicit HermitianMatrix(const Matrix& m) : mat_(symmetrized(m)) {}

    static HermitianMatrix from_rows(const std::vector<std::vector<Complex>>& rows) {
        return HermitianMatrix(Matrix::from_rows(rows));
    }

    static HermitianMatrix from_real(const std::vector<std::vector<double>>& rows) {
        return HermitianMatrix(Matrix::from_real(rows));
    }

    static HermitianMatrix identity(int dim) { return HermitianMatrix(Matrix::identity(dim)); }

    static HermitianMatrix zero(int dim) {
        if (dim < 1) throw std::invalid_argument("HermitianMatrix: dim must be >= 1");
        return HermitianMatrix(Matrix(dim));
    }

    int dim() const { return mat_.dim(); }
    const Matrix& matrix() const { return mat_; }
    const Complex& operator()(int i, int j) const { return mat_(i, j); }

    double max_abs() const { return mat_.max_abs(); }
    double frobenius_norm() const { return mat_.frobenius_norm(); }
    double real_trace() const { return mat_.trace().real(); }

    friend HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
        return HermitianMatrix(a.mat_ + b.mat_);
    }
    friend HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b) {
        return HermitianMatrix(a.mat_ - b.mat_);
    }
    friend HermitianMatrix operator*(double c, const HermitianMatrix& a) {
        return HermitianMatrix(a.mat_ * Complex(c, 0.0));
    }
    friend HermitianMatrix operator*(const HermitianMatrix& a, double c) { return c * a; }
    friend HermitianMatrix operator-(const HermitianMatrix& a) { return -1.0 * a; }

private:
    static Matrix symmetrized(const Matrix& m) {
        if (m.dim() < 1) throw std::invalid_argument("HermitianMatrix: dim must be >= 1");
        const double tol = kHermiticityRelTol * m.max_abs();
        if (!m.is_hermitian(tol))
            throw std::invalid_argument("HermitianMatrix: input is not Hermitian within tolerance");
        Matrix s(m.dim());
        for (int i = 0; i < m.dim(); ++i)
            for (int j = 0; j < m.dim(); ++j)
                s(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
        return s;
    }

    Matrix mat_;
};

}  // namespace skewnum
