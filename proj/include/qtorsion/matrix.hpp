#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "errors.hpp"
#include "scalar.hpp"

namespace qtorsion {

/**
 * Dense row-major matrix over a commutative ring.
 *
 * The matrix carries its own zero element so that products with an empty
 * inner dimension and resized blocks need no reference to a field object.
 * Shapes 0×n and n×0 are legal.
 */
template <class T>
class Matrix
{
public:
    using value_type = T;

    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols, const T& zero)
        : rows_(rows), cols_(cols), zero_(zero), data_(rows * cols, zero)
    {
    }

    static Matrix identity(std::size_t n, const T& zero, const T& one)
    {
        Matrix m(n, n, zero);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = one;
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }
    bool is_square() const noexcept { return rows_ == cols_; }
    const T& zero() const noexcept { return zero_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    bool is_zero() const
    {
        for (const T& x : data_)
            if (!(x == zero_))
                return false;
        return true;
    }

    Matrix transpose() const
    {
        Matrix t(cols_, rows_, zero_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                t(j, i) = (*this)(i, j);
        return t;
    }

    /// Rows [r0, r0+nr) and columns [c0, c0+nc).
    Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const
    {
        require(r0 + nr <= rows_ && c0 + nc <= cols_, "block out of range");
        Matrix b(nr, nc, zero_);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nc; ++j)
                b(i, j) = (*this)(r0 + i, c0 + j);
        return b;
    }

    void set_block(std::size_t r0, std::size_t c0, const Matrix& b)
    {
        require(r0 + b.rows() <= rows_ && c0 + b.cols() <= cols_, "set_block out of range");
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j)
                (*this)(r0 + i, c0 + j) = b(i, j);
    }

    Matrix column(std::size_t j) const { return block(0, j, rows_, 1); }
    Matrix row(std::size_t i) const { return block(i, 0, 1, cols_); }

    Matrix select_columns(const std::vector<std::size_t>& idx) const
    {
        Matrix m(rows_, idx.size(), zero_);
        for (std::size_t k = 0; k < idx.size(); ++k)
            for (std::size_t i = 0; i < rows_; ++i)
                m(i, k) = (*this)(i, idx[k]);
        return m;
    }

    Matrix select_rows(const std::vector<std::size_t>& idx) const
    {
        Matrix m(idx.size(), cols_, zero_);
        for (std::size_t k = 0; k < idx.size(); ++k)
            for (std::size_t j = 0; j < cols_; ++j)
                m(k, j) = (*this)(idx[k], j);
        return m;
    }

    friend bool operator==(const Matrix& a, const Matrix& b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    friend Matrix operator+(const Matrix& a, const Matrix& b)
    {
        same_shape(a, b, "+");
        Matrix c = a;
        for (std::size_t k = 0; k < c.data_.size(); ++k)
            c.data_[k] = a.data_[k] + b.data_[k];
        return c;
    }

    friend Matrix operator-(const Matrix& a, const Matrix& b)
    {
        same_shape(a, b, "-");
        Matrix c = a;
        for (std::size_t k = 0; k < c.data_.size(); ++k)
            c.data_[k] = a.data_[k] - b.data_[k];
        return c;
    }

    friend Matrix operator-(const Matrix& a)
    {
        Matrix c = a;
        for (auto& x : c.data_)
            x = -x;
        return c;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b)
    {
        if (a.cols_ != b.rows_)
            throw InternalError("matrix product shape mismatch " + a.shape() + " * " + b.shape());
        Matrix c(a.rows_, b.cols_, a.zero_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T& x = a(i, k);
                if (x == a.zero_)
                    continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    c(i, j) += x * b(k, j);
            }
        return c;
    }

    friend Matrix operator*(const T& s, const Matrix& a)
    {
        Matrix c = a;
        for (auto& x : c.data_)
            x = s * x;
        return c;
    }

    Matrix& operator+=(const Matrix& o) { return *this = *this + o; }
    Matrix& operator-=(const Matrix& o) { return *this = *this - o; }

    std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

    /// Applies f entrywise; the zero of the result is f(zero()).
    template <class Fn>
    auto map(Fn&& f) const -> Matrix<decltype(f(std::declval<const T&>()))>
    {
        using U = decltype(f(std::declval<const T&>()));
        Matrix<U> m(rows_, cols_, f(zero_));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                m(i, j) = f((*this)(i, j));
        return m;
    }

private:
    static void require(bool ok, const char* what)
    {
        if (!ok)
            throw InternalError(what);
    }
    static void same_shape(const Matrix& a, const Matrix& b, const char* op)
    {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw InternalError(std::string("matrix shape mismatch in ") + op + ": " + a.shape() + " vs " +
                                b.shape());
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    T zero_{};
    std::vector<T> data_;
};

using IntegerMatrix = Matrix<BigInt>;

inline IntegerMatrix int_matrix(std::size_t r, std::size_t c) { return IntegerMatrix(r, c, BigInt(0)); }

inline IntegerMatrix int_identity(std::size_t n) { return IntegerMatrix::identity(n, BigInt(0), BigInt(1)); }

/// Builds an integer matrix from nested initializer rows; all rows have equal length.
inline IntegerMatrix int_matrix(std::initializer_list<std::initializer_list<long long>> rows)
{
    const std::size_t r = rows.size();
    const std::size_t c = r ? rows.begin()->size() : 0;
    IntegerMatrix m(r, c, BigInt(0));
    std::size_t i = 0;
    for (const auto& row : rows) {
        if (row.size() != c)
            throw InputError("ragged matrix literal");
        std::size_t j = 0;
        for (long long x : row)
            m(i, j++) = BigInt(x);
        ++i;
    }
    return m;
}

template <class F>
Matrix<typename F::value_type> zeros(const F& field, std::size_t r, std::size_t c)
{
    return Matrix<typename F::value_type>(r, c, field.zero());
}

template <class F>
Matrix<typename F::value_type> identity(const F& field, std::size_t n)
{
    return Matrix<typename F::value_type>::identity(n, field.zero(), field.one());
}

/// Image of an integer matrix in the field.
template <class F>
Matrix<typename F::value_type> to_field(const F& field, const IntegerMatrix& m)
{
    return m.map([&](const BigInt& x) { return field.from_integer(x); });
}

/// Image of a rational matrix in the field; denominators must be units.
template <class F>
Matrix<typename F::value_type> to_field(const F& field, const Matrix<Rational>& m)
{
    return m.map([&](const Rational& x) { return from_rational(field, x); });
}

template <class T>
Matrix<T> hstack(const Matrix<T>& a, const Matrix<T>& b)
{
    if (a.rows() != b.rows())
        throw InternalError("hstack row mismatch " + a.shape() + " | " + b.shape());
    Matrix<T> m(a.rows(), a.cols() + b.cols(), a.zero());
    m.set_block(0, 0, a);
    m.set_block(0, a.cols(), b);
    return m;
}

template <class T>
Matrix<T> vstack(const Matrix<T>& a, const Matrix<T>& b)
{
    if (a.cols() != b.cols())
        throw InternalError("vstack column mismatch " + a.shape() + " / " + b.shape());
    Matrix<T> m(a.rows() + b.rows(), a.cols(), a.zero());
    m.set_block(0, 0, a);
    m.set_block(a.rows(), 0, b);
    return m;
}

/// Block-diagonal sum.
template <class T>
Matrix<T> direct_sum(const Matrix<T>& a, const Matrix<T>& b)
{
    Matrix<T> m(a.rows() + b.rows(), a.cols() + b.cols(), a.zero());
    m.set_block(0, 0, a);
    m.set_block(a.rows(), a.cols(), b);
    return m;
}

} // namespace qtorsion
