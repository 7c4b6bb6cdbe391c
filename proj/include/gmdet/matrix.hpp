#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "gmdet/errors.hpp"
#include "gmdet/ratfunc.hpp"

namespace gmdet {

/// Dense row-major matrix over an exact field type T.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }
    static Matrix scalar(std::size_t n, const T& c) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = c;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    T& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    bool is_zero() const {
        for (const auto& x : a_)
            if (!x.is_zero()) return false;
        return true;
    }

    template <class F>
    Matrix map(F&& f) const {
        Matrix m(rows_, cols_);
        for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] = f(a_[k]);
        return m;
    }

    Matrix operator-() const {
        return map([](const T& x) { return -x; });
    }
    Matrix& operator+=(const Matrix& o) {
        check_same(o);
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        check_same(o);
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
        return *this;
    }
    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw Error(ErrorKind::ShapeMismatch, "matrix product shape mismatch");
        Matrix m(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T& x = a(i, k);
                if (x.is_zero()) continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    if (!b(k, j).is_zero()) m(i, j) += x * b(k, j);
            }
        return m;
    }
    friend Matrix operator*(const Matrix& a, const T& c) {
        return a.map([&](const T& x) { return x * c; });
    }
    friend Matrix operator*(const T& c, const Matrix& a) { return a * c; }
    bool operator==(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    T trace() const {
        T t;
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
        return t;
    }

    Matrix transpose() const {
        Matrix m(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
        return m;
    }

    /// Determinant by fraction-field Gaussian elimination.
    T det() const {
        if (rows_ != cols_) throw Error(ErrorKind::ShapeMismatch, "determinant of non-square matrix");
        Matrix m = *this;
        T d(1);
        for (std::size_t c = 0; c < cols_; ++c) {
            std::size_t p = c;
            while (p < rows_ && m(p, c).is_zero()) ++p;
            if (p == rows_) return T();
            if (p != c) {
                m.swap_rows(p, c);
                d = -d;
            }
            d *= m(c, c);
            T inv = m(c, c).inverse();
            for (std::size_t r = c + 1; r < rows_; ++r) {
                if (m(r, c).is_zero()) continue;
                T f = m(r, c) * inv;
                for (std::size_t j = c; j < cols_; ++j) m(r, j) -= f * m(c, j);
            }
        }
        return d;
    }

    /// Solves this * X = rhs; throws singular-matrix when not invertible.
    Matrix solve(const Matrix& rhs) const {
        if (rows_ != cols_ || rhs.rows_ != rows_) throw Error(ErrorKind::ShapeMismatch, "solve shape mismatch");
        Matrix m = *this, b = rhs;
        std::size_t n = rows_;
        for (std::size_t c = 0; c < n; ++c) {
            std::size_t p = c;
            while (p < n && m(p, c).is_zero()) ++p;
            if (p == n) throw Error(ErrorKind::SingularMatrix, "matrix is singular");
            if (p != c) {
                m.swap_rows(p, c);
                b.swap_rows(p, c);
            }
            T inv = m(c, c).inverse();
            for (std::size_t j = c; j < n; ++j) m(c, j) *= inv;
            for (std::size_t j = 0; j < b.cols_; ++j) b(c, j) *= inv;
            for (std::size_t r = 0; r < n; ++r) {
                if (r == c || m(r, c).is_zero()) continue;
                T f = m(r, c);
                for (std::size_t j = c; j < n; ++j) m(r, j) -= f * m(c, j);
                for (std::size_t j = 0; j < b.cols_; ++j) b(r, j) -= f * b(c, j);
            }
        }
        return b;
    }

    Matrix inverse() const { return solve(identity(rows_)); }

    /// Rank by Gaussian elimination.
    std::size_t rank() const {
        Matrix m = *this;
        std::size_t r = 0;
        for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
            std::size_t p = r;
            while (p < rows_ && m(p, c).is_zero()) ++p;
            if (p == rows_) continue;
            m.swap_rows(p, r);
            T inv = m(r, c).inverse();
            for (std::size_t i = r + 1; i < rows_; ++i) {
                if (m(i, c).is_zero()) continue;
                T f = m(i, c) * inv;
                for (std::size_t j = c; j < cols_; ++j) m(i, j) -= f * m(r, j);
            }
            ++r;
        }
        return r;
    }

    void swap_rows(std::size_t i, std::size_t j) {
        for (std::size_t k = 0; k < cols_; ++k) std::swap((*this)(i, k), (*this)(j, k));
    }

    Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
        Matrix m(nr, nc);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nc; ++j) m(i, j) = (*this)(r0 + i, c0 + j);
        return m;
    }

    void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
        for (std::size_t i = 0; i < b.rows_; ++i)
            for (std::size_t j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
    }

private:
    void check_same(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(ErrorKind::ShapeMismatch, "matrix shape mismatch");
    }

    std::size_t rows_ = 0, cols_ = 0;
    std::vector<T> a_;
};

using RMatrix = Matrix<RF>;

inline std::string to_string(const RMatrix& m) {
    std::string s = "[";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        s += i ? ", [" : "[";
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) s += ", ";
            s += m(i, j).to_string();
        }
        s += "]";
    }
    return s + "]";
}

}  // namespace gmdet
