#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "matrix.hpp"

namespace qtorsion {

template <class T>
struct Echelon
{
    Matrix<T> reduced;               ///< reduced row echelon form
    std::vector<std::size_t> pivots; ///< pivot column of each nonzero row, increasing
};

/// Reduced row echelon form by Gauss-Jordan elimination with first-nonzero pivoting.
template <class F>
Echelon<typename F::value_type> rref(const F& field, Matrix<typename F::value_type> a)
{
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
        std::size_t sel = row;
        while (sel < a.rows() && field.is_zero(a(sel, col)))
            ++sel;
        if (sel == a.rows())
            continue;
        if (sel != row)
            for (std::size_t j = 0; j < a.cols(); ++j)
                std::swap(a(sel, j), a(row, j));
        const auto inv = field.inverse(a(row, col));
        for (std::size_t j = col; j < a.cols(); ++j)
            a(row, j) = a(row, j) * inv;
        for (std::size_t i = 0; i < a.rows(); ++i) {
            if (i == row || field.is_zero(a(i, col)))
                continue;
            const auto f = a(i, col);
            for (std::size_t j = col; j < a.cols(); ++j)
                a(i, j) = a(i, j) - f * a(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return {std::move(a), std::move(pivots)};
}

template <class F>
std::size_t rank(const F& field, const Matrix<typename F::value_type>& a)
{
    return rref(field, a).pivots.size();
}

/// Columns form a basis of ker a; one column per free variable.
template <class F>
Matrix<typename F::value_type> kernel_basis(const F& field, const Matrix<typename F::value_type>& a)
{
    const auto e = rref(field, a);
    std::vector<bool> is_pivot(a.cols(), false);
    for (auto p : e.pivots)
        is_pivot[p] = true;
    std::vector<std::size_t> free;
    for (std::size_t j = 0; j < a.cols(); ++j)
        if (!is_pivot[j])
            free.push_back(j);
    auto k = zeros(field, a.cols(), free.size());
    for (std::size_t f = 0; f < free.size(); ++f) {
        k(free[f], f) = field.one();
        for (std::size_t r = 0; r < e.pivots.size(); ++r)
            k(e.pivots[r], f) = -e.reduced(r, free[f]);
    }
    return k;
}

/// The pivot columns of a; they form a basis of im a.
template <class F>
Matrix<typename F::value_type> image_basis(const F& field, const Matrix<typename F::value_type>& a)
{
    return a.select_columns(rref(field, a).pivots);
}

template <class F>
typename F::value_type determinant(const F& field, Matrix<typename F::value_type> a)
{
    if (!a.is_square())
        throw InputError("determinant of non-square matrix " + a.shape());
    auto det = field.one();
    const std::size_t n = a.rows();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t sel = col;
        while (sel < n && field.is_zero(a(sel, col)))
            ++sel;
        if (sel == n)
            return field.zero();
        if (sel != col) {
            for (std::size_t j = col; j < n; ++j)
                std::swap(a(sel, j), a(col, j));
            det = -det;
        }
        det = det * a(col, col);
        const auto inv = field.inverse(a(col, col));
        for (std::size_t i = col + 1; i < n; ++i) {
            if (field.is_zero(a(i, col)))
                continue;
            const auto f = a(i, col) * inv;
            for (std::size_t j = col; j < n; ++j)
                a(i, j) = a(i, j) - f * a(col, j);
        }
    }
    return det;
}

/// Some X with a·X = b (free variables set to 0), or nullopt.
template <class F>
std::optional<Matrix<typename F::value_type>> solve(const F& field, const Matrix<typename F::value_type>& a,
                                                    const Matrix<typename F::value_type>& b)
{
    if (a.rows() != b.rows())
        throw InternalError("solve shape mismatch " + a.shape() + " vs " + b.shape());
    const auto e = rref(field, hstack(a, b));
    auto x = zeros(field, a.cols(), b.cols());
    for (std::size_t r = 0; r < e.pivots.size(); ++r) {
        if (e.pivots[r] >= a.cols())
            return std::nullopt;
        for (std::size_t j = 0; j < b.cols(); ++j)
            x(e.pivots[r], j) = e.reduced(r, a.cols() + j);
    }
    return x;
}

template <class F>
std::optional<Matrix<typename F::value_type>> inverse(const F& field, const Matrix<typename F::value_type>& a)
{
    if (!a.is_square())
        throw InputError("inverse of non-square matrix " + a.shape());
    const std::size_t n = a.rows();
    const auto e = rref(field, hstack(a, identity(field, n)));
    if (e.pivots.size() < n || (n > 0 && e.pivots[n - 1] != n - 1))
        return std::nullopt;
    return e.reduced.block(0, n, n, n);
}

template <class F>
Matrix<typename F::value_type> inverse_or_throw(const F& field, const Matrix<typename F::value_type>& a,
                                                const char* what)
{
    auto inv = inverse(field, a);
    if (!inv)
        throw InternalError(std::string("singular matrix: ") + what);
    return *inv;
}

// Subspaces of F^n are represented by matrices whose columns span them.

/// Basis of the span of the columns of a.
template <class F>
Matrix<typename F::value_type> span_basis(const F& field, const Matrix<typename F::value_type>& a)
{
    return image_basis(field, a);
}

template <class F>
Matrix<typename F::value_type> subspace_sum(const F& field, const Matrix<typename F::value_type>& a,
                                            const Matrix<typename F::value_type>& b)
{
    return image_basis(field, hstack(a, b));
}

template <class F>
Matrix<typename F::value_type> subspace_intersection(const F& field, const Matrix<typename F::value_type>& a,
                                                     const Matrix<typename F::value_type>& b)
{
    const auto ab = image_basis(field, a);
    const auto bb = image_basis(field, b);
    const auto k = kernel_basis(field, hstack(ab, -bb));
    return image_basis(field, ab * k.block(0, 0, ab.cols(), k.cols()));
}

/// True iff every column of v lies in span(a).
template <class F>
bool subspace_contains(const F& field, const Matrix<typename F::value_type>& a,
                       const Matrix<typename F::value_type>& v)
{
    return rank(field, hstack(a, v)) == rank(field, a);
}

template <class F>
bool columns_independent(const F& field, const Matrix<typename F::value_type>& a)
{
    return rank(field, a) == a.cols();
}

/// Coordinates of the columns of v in the independent columns of basis.
template <class F>
std::optional<Matrix<typename F::value_type>> coordinates(const F& field,
                                                          const Matrix<typename F::value_type>& basis,
                                                          const Matrix<typename F::value_type>& v)
{
    return solve(field, basis, v);
}

/// Extends independent columns b to a basis of F^n by appending standard vectors.
/// Returns the appended columns only.
template <class F>
Matrix<typename F::value_type> complement_basis(const F& field, const Matrix<typename F::value_type>& b,
                                                std::size_t n)
{
    const auto e = rref(field, hstack(b, identity(field, n)));
    std::vector<std::size_t> extra;
    for (auto p : e.pivots)
        if (p >= b.cols())
            extra.push_back(p - b.cols());
    return identity(field, n).select_columns(extra);
}

/// Dimension of the image of span(a) in F^n / span(b).
template <class F>
std::size_t quotient_dimension(const F& field, const Matrix<typename F::value_type>& a,
                               const Matrix<typename F::value_type>& b)
{
    return rank(field, hstack(a, b)) - rank(field, b);
}

} // namespace qtorsion
