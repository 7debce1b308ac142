#pragma once

#include <array>
#include <string>
#include <vector>

#include "linalg.hpp"
#include "smith.hpp"

namespace qtorsion {

/**
 * Bounded chain complex C_0 <- C_1 <- ... <- C_n with standard preferred bases.
 *
 * d[k-1] is the boundary d_k : C_k -> C_{k-1}, of shape ranks[k-1] x ranks[k].
 */
template <class T>
struct BasedChainComplex
{
    std::vector<std::size_t> ranks;
    std::vector<Matrix<T>> d;
    T zero{};

    std::size_t top() const { return ranks.empty() ? 0 : ranks.size() - 1; }

    std::size_t rank(long k) const
    {
        return k < 0 || k >= static_cast<long>(ranks.size()) ? 0 : ranks[static_cast<std::size_t>(k)];
    }

    /// d_k, a zero map of the right shape outside 1..n.
    Matrix<T> boundary(long k) const
    {
        if (k >= 1 && k <= static_cast<long>(d.size()))
            return d[static_cast<std::size_t>(k - 1)];
        return Matrix<T>(rank(k - 1), rank(k), zero);
    }

    /// Throws InputError if a boundary has the wrong shape.
    void check_shapes() const
    {
        if (d.size() + 1 != ranks.size() && !(ranks.empty() && d.empty()))
            throw InputError("complex with " + std::to_string(ranks.size()) + " ranks needs " +
                             std::to_string(ranks.size() ? ranks.size() - 1 : 0) + " boundaries", "boundaries");
        for (std::size_t k = 1; k <= d.size(); ++k)
            if (d[k - 1].rows() != ranks[k - 1] || d[k - 1].cols() != ranks[k])
                throw InputError("boundary d_" + std::to_string(k) + " has shape " + d[k - 1].shape() +
                                     ", expected " + std::to_string(ranks[k - 1]) + "x" + std::to_string(ranks[k]),
                                 "boundaries");
    }

    /// Smallest k with d_{k-1} d_k != 0, or 0 when d^2 = 0.
    std::size_t first_square_violation() const
    {
        for (std::size_t k = 2; k <= d.size(); ++k)
            if (!(d[k - 2] * d[k - 1]).is_zero())
                return k;
        return 0;
    }
};

using IntegerComplex = BasedChainComplex<BigInt>;

template <class F>
BasedChainComplex<typename F::value_type> to_field(const F& field, const IntegerComplex& c)
{
    BasedChainComplex<typename F::value_type> out{c.ranks, {}, field.zero()};
    for (const auto& m : c.d)
        out.d.push_back(to_field(field, m));
    return out;
}

/// Free ranks and invariant factors (all > 1) of H_k(C; Z).
struct IntegralHomology
{
    std::vector<std::size_t> free_rank;
    std::vector<std::vector<BigInt>> factors;

    /// Product of all invariant factors in degrees of the given parity.
    BigInt torsion_order(int parity) const
    {
        BigInt n(1);
        for (std::size_t k = 0; k < factors.size(); ++k)
            if (static_cast<int>(k % 2) == parity)
                for (const auto& a : factors[k])
                    n *= a;
        return n;
    }
};

/// Columns of reps[k] are integral cycles whose classes form a basis of H_k^free.
struct HomologyBasis
{
    std::vector<IntegerMatrix> reps;
};

/**
 * Integral homology by Smith normal form.
 *
 * For each k the saturated kernel K = ker d_k is read off the last columns of
 * V in SNF(d_k). Writing d_{k+1} = K X and SNF(X) = U' X V' = D', the basis
 * K U'^{-1} splits into torsion generators (columns with D' entries) and free
 * generators (the rest).
 */
inline std::pair<IntegralHomology, HomologyBasis> integral_homology(const IntegerComplex& c)
{
    c.check_shapes();
    if (auto k = c.first_square_violation())
        throw InputError("d_" + std::to_string(k - 1) + " d_" + std::to_string(k) + " != 0", "boundaries");
    IntegralHomology h;
    HomologyBasis basis;
    for (std::size_t k = 0; k < c.ranks.size(); ++k) {
        const auto dk = c.boundary(static_cast<long>(k));
        const auto snf = smith_normal_form(dk);
        const std::size_t rk = c.ranks[k];
        std::vector<std::size_t> kcols;
        for (std::size_t j = snf.rank; j < rk; ++j)
            kcols.push_back(j);
        const auto kernel = snf.V.select_columns(kcols);
        const auto next = c.boundary(static_cast<long>(k) + 1);
        const auto coords = snf.Vinv.select_rows(kcols) * next;
        const auto s2 = smith_normal_form(coords);
        const auto adapted = kernel * s2.Uinv;
        std::vector<BigInt> factors;
        for (std::size_t i = 0; i < s2.rank; ++i)
            if (s2.D(i, i) > 1)
                factors.push_back(s2.D(i, i));
        std::vector<std::size_t> free;
        for (std::size_t j = s2.rank; j < kcols.size(); ++j)
            free.push_back(j);
        h.free_rank.push_back(free.size());
        h.factors.push_back(std::move(factors));
        basis.reps.push_back(adapted.select_columns(free));
    }
    return {h, basis};
}

/**
 * True iff the columns of reps[k] are cycles projecting to a Z-basis of
 * H_k^free. Checked in the adapted basis of integral_homology: the free
 * coordinates of the representatives must form a unimodular matrix.
 */
inline bool is_integral_homology_basis(const IntegerComplex& c, const HomologyBasis& given)
{
    if (given.reps.size() != c.ranks.size())
        return false;
    for (std::size_t k = 0; k < c.ranks.size(); ++k) {
        const auto& r = given.reps[k];
        if (r.rows() != c.ranks[k] || !(c.boundary(static_cast<long>(k)) * r).is_zero())
            return false;
        const auto dk = c.boundary(static_cast<long>(k));
        const auto snf = smith_normal_form(dk);
        std::vector<std::size_t> kcols;
        for (std::size_t j = snf.rank; j < c.ranks[k]; ++j)
            kcols.push_back(j);
        const auto next = c.boundary(static_cast<long>(k) + 1);
        const auto s2 = smith_normal_form(snf.Vinv.select_rows(kcols) * next);
        // Coordinates in the adapted kernel basis K U'^{-1} are U' (V^{-1} r).
        const auto coords = s2.U * (snf.Vinv.select_rows(kcols) * r);
        std::vector<std::size_t> free;
        for (std::size_t j = s2.rank; j < kcols.size(); ++j)
            free.push_back(j);
        if (free.size() != r.cols())
            return false;
        if (abs(integer_determinant(coords.select_rows(free))) != 1)
            return false;
    }
    return true;
}

/// True iff char F = 0, or p is odd and divides no invariant factor.
inline bool admissible_characteristic(const IntegralHomology& h, const FieldSpec& f)
{
    if (f.is_rational())
        return true;
    if (f.p == 2)
        return false;
    for (const auto& fs : h.factors)
        for (const auto& a : fs)
            if (a % f.p == 0)
                return false;
    return true;
}

/// Throws InadmissibleCharacteristic naming the first offending factor.
inline void require_admissible(const IntegralHomology& h, const FieldSpec& f)
{
    if (f.is_rational())
        return;
    for (const auto& fs : h.factors)
        for (const auto& a : fs)
            if (a % f.p == 0)
                throw InadmissibleCharacteristic(
                    "characteristic " + std::to_string(f.p) + " divides invariant factor " + a.str(), a.str());
}

/**
 * Twisted pearl complex of a 3-fold over a field, N_L = 2.
 *
 * dm[k-1] : C_k -> C_{k-1}   (k = 1..3)
 * d1[k]   : C_k -> C_{k+1}   (k = 0..2)
 * d2      : C_0 -> C_3
 */
template <class T>
struct PearlComplex
{
    std::array<std::size_t, 4> ranks{};
    std::array<Matrix<T>, 3> dm;
    std::array<Matrix<T>, 3> d1;
    Matrix<T> d2;
    T zero{};

    std::size_t rank(long k) const { return k < 0 || k > 3 ? 0 : ranks[static_cast<std::size_t>(k)]; }

    /// d_M : C_k -> C_{k-1}; zero outside 1..3.
    Matrix<T> dM(long k) const
    {
        if (k >= 1 && k <= 3)
            return dm[static_cast<std::size_t>(k - 1)];
        return Matrix<T>(rank(k - 1), rank(k), zero);
    }

    /// d1 : C_k -> C_{k+1}; zero outside 0..2.
    Matrix<T> D1(long k) const
    {
        if (k >= 0 && k <= 2)
            return d1[static_cast<std::size_t>(k)];
        return Matrix<T>(rank(k + 1), rank(k), zero);
    }

    /// d2 : C_k -> C_{k+3}; only k = 0 is nonzero.
    Matrix<T> D2(long k) const
    {
        if (k == 0)
            return d2;
        return Matrix<T>(rank(k + 3), rank(k), zero);
    }

    BasedChainComplex<T> morse() const
    {
        return {{ranks[0], ranks[1], ranks[2], ranks[3]}, {dm[0], dm[1], dm[2]}, zero};
    }

    std::size_t total_rank() const { return ranks[0] + ranks[1] + ranks[2] + ranks[3]; }
    std::size_t offset(std::size_t k) const
    {
        std::size_t o = 0;
        for (std::size_t i = 0; i < k; ++i)
            o += ranks[i];
        return o;
    }

    /// D = d_M + d1 + d2 on C_0 ⊕ C_1 ⊕ C_2 ⊕ C_3.
    Matrix<T> total_differential() const
    {
        Matrix<T> m(total_rank(), total_rank(), zero);
        for (long k = 1; k <= 3; ++k)
            m.set_block(offset(k - 1), offset(k), dM(k));
        for (long k = 0; k <= 2; ++k)
            m.set_block(offset(k + 1), offset(k), D1(k));
        m.set_block(offset(3), 0, d2);
        return m;
    }

    void check_shapes() const
    {
        auto want = [&](const Matrix<T>& m, std::size_t r, std::size_t c, const std::string& name) {
            if (m.rows() != r || m.cols() != c)
                throw InputError(name + " has shape " + m.shape() + ", expected " + std::to_string(r) + "x" +
                                     std::to_string(c),
                                 name);
        };
        for (long k = 1; k <= 3; ++k)
            want(dm[k - 1], rank(k - 1), rank(k), "dM[" + std::to_string(k) + "]");
        for (long k = 0; k <= 2; ++k)
            want(d1[k], rank(k + 1), rank(k), "d1[" + std::to_string(k) + "]");
        want(d2, rank(3), rank(0), "d2");
    }
};

template <class F>
PearlComplex<typename F::value_type> pearl_from_morse(const F& field, const IntegerComplex& morse)
{
    if (morse.ranks.size() != 4)
        throw InputError("pearl complexes have degrees 0..3", "ranks");
    PearlComplex<typename F::value_type> p;
    p.zero = field.zero();
    for (std::size_t k = 0; k < 4; ++k)
        p.ranks[k] = morse.ranks[k];
    for (long k = 1; k <= 3; ++k)
        p.dm[k - 1] = to_field(field, morse.boundary(k));
    for (long k = 0; k <= 2; ++k)
        p.d1[k] = zeros(field, p.rank(k + 1), p.rank(k));
    p.d2 = zeros(field, p.rank(3), p.rank(0));
    return p;
}

inline const char* const kViolationDM2 = "d_M^2 != 0";
inline const char* const kViolationAnti = "d_M d1 + d1 d_M != 0";
inline const char* const kViolationD1Sq = "d1^2 + d_M d2 + d2 d_M != 0";

/// Names of the graded components of D^2 that fail to vanish.
template <class T>
std::vector<std::string> validate_pearl(const PearlComplex<T>& p)
{
    p.check_shapes();
    std::vector<std::string> out;
    bool dm2 = true, anti = true, sq = true;
    for (long k = 2; k <= 3; ++k)
        dm2 = dm2 && (p.dM(k - 1) * p.dM(k)).is_zero();
    for (long k = 0; k <= 3; ++k)
        anti = anti && (p.dM(k + 1) * p.D1(k) + p.D1(k - 1) * p.dM(k)).is_zero();
    for (long k = 0; k <= 1; ++k)
        sq = sq && (p.D1(k + 1) * p.D1(k) + p.dM(k + 3) * p.D2(k) + p.D2(k - 1) * p.dM(k)).is_zero();
    if (!dm2)
        out.emplace_back(kViolationDM2);
    if (!anti)
        out.emplace_back(kViolationAnti);
    if (!sq)
        out.emplace_back(kViolationD1Sq);
    return out;
}

/// Z/2-graded complex C_odd <-> C_even.
template <class T>
struct PeriodicComplex
{
    std::size_t odd_rank = 0, even_rank = 0;
    Matrix<T> d_oe; ///< C_odd -> C_even, shape even x odd
    Matrix<T> d_eo; ///< C_even -> C_odd, shape odd x even
};

/// C_odd = C_1 ⊕ C_3, C_even = C_0 ⊕ C_2, with the blocks of D.
template <class T>
PeriodicComplex<T> fold_periodic(const PearlComplex<T>& p)
{
    if (auto v = validate_pearl(p); !v.empty())
        throw InputError("invalid pearl complex: " + v.front(), "pearl");
    const std::size_t r0 = p.ranks[0], r1 = p.ranks[1], r2 = p.ranks[2], r3 = p.ranks[3];
    PeriodicComplex<T> f{r1 + r3, r0 + r2, Matrix<T>(r0 + r2, r1 + r3, p.zero), Matrix<T>(r1 + r3, r0 + r2, p.zero)};
    f.d_oe.set_block(0, 0, p.dM(1));
    f.d_oe.set_block(r0, 0, p.D1(1));
    f.d_oe.set_block(r0, r1, p.dM(3));
    f.d_eo.set_block(0, 0, p.D1(0));
    f.d_eo.set_block(0, r0, p.dM(2));
    f.d_eo.set_block(r1, 0, p.d2);
    f.d_eo.set_block(r1, r0, p.D1(2));
    return f;
}

template <class F>
bool is_acyclic(const F& field, const PeriodicComplex<typename F::value_type>& c)
{
    if (c.odd_rank != c.even_rank)
        return false;
    return rank(field, c.d_oe) + rank(field, c.d_eo) == c.odd_rank;
}

/// Rank of H(⊕C_k, D) for the total differential.
template <class F>
std::size_t total_homology_rank(const F& field, const PearlComplex<typename F::value_type>& p)
{
    return p.total_rank() - 2 * rank(field, p.total_differential());
}

} // namespace qtorsion
