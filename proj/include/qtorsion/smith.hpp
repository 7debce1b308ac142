#pragma once

#include <utility>
#include <vector>

#include "linalg.hpp"

namespace qtorsion {

/// U·A·V = D with U, V unimodular, D diagonal, d_1 | d_2 | ... and d_i ≥ 0.
struct SmithDecomposition
{
    IntegerMatrix U, Uinv, V, Vinv, D;
    std::size_t rank = 0;

    /// Nonzero diagonal entries in order.
    std::vector<BigInt> factors() const
    {
        std::vector<BigInt> f;
        for (std::size_t i = 0; i < rank; ++i)
            f.push_back(D(i, i));
        return f;
    }
};

namespace detail {

struct SmithState
{
    IntegerMatrix a, U, Uinv, V, Vinv;

    // a_i -= q a_t (rows)
    void row_sub(std::size_t i, std::size_t t, const BigInt& q)
    {
        for (std::size_t j = 0; j < a.cols(); ++j)
            a(i, j) -= q * a(t, j);
        for (std::size_t j = 0; j < U.cols(); ++j)
            U(i, j) -= q * U(t, j);
        for (std::size_t r = 0; r < Uinv.rows(); ++r)
            Uinv(r, t) += q * Uinv(r, i);
    }
    void row_swap(std::size_t i, std::size_t t)
    {
        if (i == t)
            return;
        for (std::size_t j = 0; j < a.cols(); ++j)
            std::swap(a(i, j), a(t, j));
        for (std::size_t j = 0; j < U.cols(); ++j)
            std::swap(U(i, j), U(t, j));
        for (std::size_t r = 0; r < Uinv.rows(); ++r)
            std::swap(Uinv(r, i), Uinv(r, t));
    }
    void row_negate(std::size_t t)
    {
        for (std::size_t j = 0; j < a.cols(); ++j)
            a(t, j) = -a(t, j);
        for (std::size_t j = 0; j < U.cols(); ++j)
            U(t, j) = -U(t, j);
        for (std::size_t r = 0; r < Uinv.rows(); ++r)
            Uinv(r, t) = -Uinv(r, t);
    }
    // col_j -= q col_t
    void col_sub(std::size_t j, std::size_t t, const BigInt& q)
    {
        for (std::size_t i = 0; i < a.rows(); ++i)
            a(i, j) -= q * a(i, t);
        for (std::size_t i = 0; i < V.rows(); ++i)
            V(i, j) -= q * V(i, t);
        for (std::size_t c = 0; c < Vinv.cols(); ++c)
            Vinv(t, c) += q * Vinv(j, c);
    }
    void col_swap(std::size_t j, std::size_t t)
    {
        if (j == t)
            return;
        for (std::size_t i = 0; i < a.rows(); ++i)
            std::swap(a(i, j), a(i, t));
        for (std::size_t i = 0; i < V.rows(); ++i)
            std::swap(V(i, j), V(i, t));
        for (std::size_t c = 0; c < Vinv.cols(); ++c)
            std::swap(Vinv(j, c), Vinv(t, c));
    }
};

} // namespace detail

/**
 * Smith normal form by repeated Euclidean reduction.
 *
 * Pivot choice: the smallest nonzero absolute value in the trailing block,
 * first by row then by column. Divisibility is restored by adding the
 * offending row into the pivot row.
 */
inline SmithDecomposition smith_normal_form(const IntegerMatrix& A)
{
    const std::size_t m = A.rows(), n = A.cols();
    detail::SmithState s{A, int_identity(m), int_identity(m), int_identity(n), int_identity(n)};
    auto& a = s.a;
    std::size_t t = 0;
    for (; t < std::min(m, n); ++t) {
        for (;;) {
            std::size_t pi = m, pj = n;
            for (std::size_t i = t; i < m; ++i)
                for (std::size_t j = t; j < n; ++j)
                    if (a(i, j) != 0 && (pi == m || abs(a(i, j)) < abs(a(pi, pj)))) {
                        pi = i;
                        pj = j;
                    }
            if (pi == m)
                break;
            s.row_swap(pi, t);
            s.col_swap(pj, t);
            bool clean = true;
            for (std::size_t i = t + 1; i < m; ++i)
                if (a(i, t) != 0) {
                    s.row_sub(i, t, BigInt(a(i, t) / a(t, t)));
                    clean = clean && a(i, t) == 0;
                }
            for (std::size_t j = t + 1; j < n; ++j)
                if (a(t, j) != 0) {
                    s.col_sub(j, t, BigInt(a(t, j) / a(t, t)));
                    clean = clean && a(t, j) == 0;
                }
            if (!clean)
                continue;
            std::size_t bad = m;
            for (std::size_t i = t + 1; i < m && bad == m; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (a(i, j) % a(t, t) != 0) {
                        bad = i;
                        break;
                    }
            if (bad == m)
                break;
            // a_t += a_bad, expressed as a_t -= (-1) a_bad.
            s.row_sub(t, bad, BigInt(-1));
        }
        if (a(t, t) == 0)
            break;
        if (a(t, t) < 0)
            s.row_negate(t);
    }
    SmithDecomposition out{std::move(s.U), std::move(s.Uinv), std::move(s.V), std::move(s.Vinv), std::move(a), 0};
    while (out.rank < std::min(m, n) && out.D(out.rank, out.rank) != 0)
        ++out.rank;
    return out;
}

/// Determinant over Z, computed exactly through Q.
inline BigInt integer_determinant(const IntegerMatrix& A)
{
    const Rational d = determinant(RationalField{}, to_field(RationalField{}, A));
    return boost::multiprecision::numerator(d);
}

} // namespace qtorsion
