#pragma once

#include <array>
#include <map>
#include <optional>
#include <vector>

#include "complexes.hpp"

namespace qtorsion {

/// Integral homology of a closed orientable 3-fold: Betti numbers (1, b, b, 1), torsion in H_1.
struct ThreefoldHomology
{
    std::size_t b = 0;
    std::vector<BigInt> torsion;

    IntegralHomology integral() const { return {{1, b, b, 1}, {{}, torsion, {}, {}}}; }
};

/// Alternating integer 3-form on Z^b, stored by i < j < k (0-based).
class TripleForm
{
public:
    using Key = std::array<std::size_t, 3>;

    explicit TripleForm(std::size_t b = 0) : b_(b) {}

    std::size_t b() const noexcept { return b_; }
    const std::map<Key, BigInt>& entries() const noexcept { return entries_; }
    bool is_zero() const noexcept { return entries_.empty(); }

    /// I(i,j,k), extended alternately.
    BigInt operator()(std::size_t i, std::size_t j, std::size_t k) const
    {
        auto [key, sign] = normalize(i, j, k);
        if (sign == 0)
            return BigInt(0);
        auto it = entries_.find(key);
        if (it == entries_.end())
            return BigInt(0);
        return sign > 0 ? it->second : BigInt(-it->second);
    }

    /// Sets I(i,j,k) = v, and all permutations by sign.
    void set(std::size_t i, std::size_t j, std::size_t k, const BigInt& v)
    {
        if (i >= b_ || j >= b_ || k >= b_)
            throw InputError("form index out of range for b = " + std::to_string(b_), "form");
        auto [key, sign] = normalize(i, j, k);
        if (sign == 0) {
            if (v != 0)
                throw InputError("alternating form entry with a repeated index must vanish", "form");
            return;
        }
        const BigInt w = sign > 0 ? v : BigInt(-v);
        if (w == 0)
            entries_.erase(key);
        else
            entries_[key] = w;
    }

    /// I'(i,j,k) = Σ g(a,i) g(b,j) g(c,k) I(a,b,c), i.e. the form in the basis given by the columns of g.
    TripleForm transform(const IntegerMatrix& g) const
    {
        TripleForm out(b_);
        for (std::size_t i = 0; i < b_; ++i)
            for (std::size_t j = i + 1; j < b_; ++j)
                for (std::size_t k = j + 1; k < b_; ++k) {
                    BigInt total(0);
                    for (const auto& [key, v] : entries_) {
                        const auto [a, bb, c] = key;
                        // The six orderings of (a, bb, c); the last three are odd.
                        const std::array<std::array<std::size_t, 3>, 6> perms{
                            {{a, bb, c}, {bb, c, a}, {c, a, bb}, {bb, a, c}, {a, c, bb}, {c, bb, a}}};
                        BigInt t(0);
                        for (int p = 0; p < 6; ++p) {
                            const BigInt m = g(perms[p][0], i) * g(perms[p][1], j) * g(perms[p][2], k);
                            t += p < 3 ? m : BigInt(-m);
                        }
                        total += v * t;
                    }
                    out.set(i, j, k, total);
                }
        return out;
    }

    friend bool operator==(const TripleForm& a, const TripleForm& b) { return a.b_ == b.b_ && a.entries_ == b.entries_; }

private:
    static std::pair<Key, int> normalize(std::size_t i, std::size_t j, std::size_t k)
    {
        if (i == j || j == k || i == k)
            return {{0, 0, 0}, 0};
        int sign = 1;
        std::array<std::size_t, 3> a{i, j, k};
        for (int pass = 0; pass < 2; ++pass)
            for (int t = 0; t < 2; ++t)
                if (a[t] > a[t + 1]) {
                    std::swap(a[t], a[t + 1]);
                    sign = -sign;
                }
        return {a, sign};
    }

    std::size_t b_;
    std::map<Key, BigInt> entries_;
};

/// e_i · e_j = Σ_k I(i,j,k) ē_k, as a column in the ē basis.
template <class F>
Matrix<typename F::value_type> product_h2(const F& field, const TripleForm& form, std::size_t i, std::size_t j)
{
    if (i >= form.b() || j >= form.b())
        throw InputError("product index out of range", "form");
    auto v = zeros(field, form.b(), 1);
    for (std::size_t k = 0; k < form.b(); ++k)
        v(k, 0) = field.from_integer(form(i, j, k));
    return v;
}

/// The b x b alternating matrix I(v, ·, ·).
template <class F>
Matrix<typename F::value_type> contract(const F& field, const TripleForm& form,
                                        const std::vector<typename F::value_type>& v)
{
    const std::size_t b = form.b();
    auto m = zeros(field, b, b);
    for (const auto& [key, c] : form.entries()) {
        const auto [i, j, k] = key;
        const auto x = field.from_integer(c);
        // The six terms of the alternating extension with v in the first slot.
        m(j, k) += v[i] * x;
        m(k, j) -= v[i] * x;
        m(k, i) += v[j] * x;
        m(i, k) -= v[j] * x;
        m(i, j) += v[k] * x;
        m(j, i) -= v[k] * x;
    }
    return m;
}

/// Index of the first nonzero coordinate; v must be nonzero.
template <class F>
std::size_t pivot_index(const F& field, const std::vector<typename F::value_type>& v)
{
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!field.is_zero(v[i]))
            return i;
    throw InputError("slice vector is zero", "vector");
}

/**
 * Determinant of I(v,·,·) on the complement spanned by the coordinates other
 * than the pivot of v, if nonzero.
 */
template <class F>
std::optional<typename F::value_type> symplectic_slice(const F& field, const TripleForm& form,
                                                       const std::vector<typename F::value_type>& v)
{
    if (v.size() != form.b())
        throw InputError("slice vector has wrong length", "vector");
    const std::size_t piv = pivot_index(field, v);
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < form.b(); ++i)
        if (i != piv)
            keep.push_back(i);
    const auto m = contract(field, form, v).select_rows(keep).select_columns(keep);
    const auto det = determinant(field, m);
    if (field.is_zero(det))
        return std::nullopt;
    if (form.b() % 2 == 0)
        throw InternalError("nondegenerate alternating form in odd dimension");
    return det;
}

template <class T>
struct SliceResult
{
    std::optional<std::vector<T>> vector;
    std::optional<T> det;
    bool randomized = false; ///< the search was not exhaustive
};

/**
 * Searches for a slice: standard basis vectors, then every projective point
 * when the field is F_p with p^b ≤ 10^5, otherwise `trials` seeded random vectors.
 */
template <class F>
SliceResult<typename F::value_type> find_slice(const F& field, const TripleForm& form, std::size_t trials = 200,
                                               std::uint64_t seed = 0)
{
    using T = typename F::value_type;
    const std::size_t b = form.b();
    SliceResult<T> out;
    auto attempt = [&](const std::vector<T>& v) {
        if (auto d = symplectic_slice(field, form, v)) {
            out.vector = v;
            out.det = d;
            return true;
        }
        return false;
    };
    for (std::size_t i = 0; i < b; ++i) {
        std::vector<T> v(b, field.zero());
        v[i] = field.one();
        if (attempt(v))
            return out;
    }
    if (b < 2)
        return out;
    const std::uint64_t p = field.characteristic();
    std::uint64_t count = 1;
    bool exhaustive = p != 0;
    for (std::size_t i = 0; i < b && exhaustive; ++i) {
        count *= p;
        exhaustive = count <= 100000;
    }
    if (exhaustive) {
        // Projective points: first nonzero coordinate equal to 1.
        for (std::size_t lead = 0; lead < b; ++lead) {
            const std::size_t tail = b - lead - 1;
            std::uint64_t n = 1;
            for (std::size_t t = 0; t < tail; ++t)
                n *= p;
            for (std::uint64_t code = 0; code < n; ++code) {
                std::vector<T> v(b, field.zero());
                v[lead] = field.one();
                std::uint64_t c = code;
                for (std::size_t t = 0; t < tail; ++t) {
                    v[lead + 1 + t] = field.from_int(static_cast<long long>(c % p));
                    c /= p;
                }
                if (attempt(v))
                    return out;
            }
        }
        return out;
    }
    out.randomized = true;
    Rng rng = Rng(seed).split("find_slice");
    for (std::size_t t = 0; t < trials; ++t) {
        std::vector<T> v(b, field.zero());
        bool nonzero = false;
        for (auto& x : v) {
            x = p == 0 ? field.from_int(rng.uniform(-5, 5)) : field.random(rng);
            nonzero = nonzero || !field.is_zero(x);
        }
        if (nonzero && attempt(v))
            return out;
    }
    return out;
}

/// True iff the products e_i · e_j span H_1 (which needs b ≥ 1); H_0 is then reached by duality.
template <class F>
bool ring_generated_by_h2(const F& field, const TripleForm& form)
{
    const std::size_t b = form.b();
    if (b == 0)
        return false;
    auto span = zeros(field, b, b * b);
    for (std::size_t i = 0; i < b; ++i)
        for (std::size_t j = 0; j < b; ++j)
            span.set_block(0, i * b + j, product_h2(field, form, i, j));
    return rank(field, span) == b;
}

enum class Dichotomy { SlicedOddB, ZeroForm, Incompatible };

inline const char* dichotomy_name(Dichotomy d)
{
    switch (d) {
    case Dichotomy::SlicedOddB: return "SlicedOddB";
    case Dichotomy::ZeroForm: return "ZeroForm";
    default: return "Incompatible";
    }
}

/// A slice takes precedence, so b = 1 (vacuous slice, zero form) is SlicedOddB.
template <class F>
Dichotomy dichotomy_class(const F& field, const TripleForm& form, std::size_t trials = 200, std::uint64_t seed = 0)
{
    if (find_slice(field, form, trials, seed).vector) {
        if (form.b() % 2 == 0)
            throw InternalError("slice found with even b");
        return Dichotomy::SlicedOddB;
    }
    bool zero = true;
    for (const auto& [key, v] : form.entries())
        zero = zero && field.is_zero(field.from_integer(v));
    return zero ? Dichotomy::ZeroForm : Dichotomy::Incompatible;
}

/**
 * Homology ring H_*(L; F) of a 3-fold with Poincaré dual bases, ordered
 * (p, ē_1..ē_b, e_1..e_b, [L]) in degrees (0, 1.., 2.., 3). The intersection
 * product has degree -3: [L] is the unit, e_i·e_j = Σ_k I(i,j,k) ē_k and
 * e_i·ē_j = ē_j·e_i = δ_ij p.
 */
template <class F>
class HomologyRing
{
public:
    using T = typename F::value_type;
    using M = Matrix<T>;

    HomologyRing(const F& field, TripleForm form) : field_(field), form_(std::move(form)), b_(form_.b()) {}

    std::size_t b() const { return b_; }
    std::size_t dim() const { return 2 * b_ + 2; }
    std::size_t point() const { return 0; }
    std::size_t ebar(std::size_t i) const { return 1 + i; }
    std::size_t e(std::size_t i) const { return 1 + b_ + i; }
    std::size_t fundamental() const { return 2 * b_ + 1; }

    int degree(std::size_t x) const
    {
        if (x == 0)
            return 0;
        if (x <= b_)
            return 1;
        if (x <= 2 * b_)
            return 2;
        return 3;
    }

    /// Product of two basis elements as a column.
    M product(std::size_t x, std::size_t y) const
    {
        M out = zeros(field_, dim(), 1);
        const int dx = degree(x), dy = degree(y);
        if (dx == 3) {
            out(y, 0) = field_.one();
        } else if (dy == 3) {
            out(x, 0) = field_.one();
        } else if (dx == 2 && dy == 2) {
            for (std::size_t k = 0; k < b_; ++k)
                out(ebar(k), 0) = field_.from_integer(form_(x - 1 - b_, y - 1 - b_, k));
        } else if (dx == 2 && dy == 1) {
            if (x - 1 - b_ == y - 1)
                out(point(), 0) = field_.one();
        } else if (dx == 1 && dy == 2) {
            if (x - 1 == y - 1 - b_)
                out(point(), 0) = field_.one();
        }
        return out;
    }

    /// Full derivation of degree +1 from its blocks H_0 -> H_1, H_1 -> H_2, H_2 -> H_3.
    M derivation(const M& d0, const M& d1, const M& d2) const
    {
        M d = zeros(field_, dim(), dim());
        d.set_block(ebar(0), point(), d0);
        d.set_block(e(0), ebar(0), d1);
        d.set_block(fundamental(), e(0), d2);
        return d;
    }

    /// Basis pairs (x, y) where d(x·y) ≠ dx·y + (-1)^{3-|x|} x·dy.
    std::vector<std::pair<std::size_t, std::size_t>> leibniz_failures(const M& d) const
    {
        std::vector<std::pair<std::size_t, std::size_t>> bad;
        const std::size_t n = dim();
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t y = 0; y < n; ++y) {
                M lhs = d * product(x, y);
                M rhs = zeros(field_, n, 1);
                for (std::size_t a = 0; a < n; ++a) {
                    if (!field_.is_zero(d(a, x)))
                        rhs += d(a, x) * product(a, y);
                    if (!field_.is_zero(d(a, y))) {
                        const auto c = (3 - degree(x)) % 2 == 0 ? d(a, y) : T(-d(a, y));
                        rhs += c * product(x, a);
                    }
                }
                if (!(lhs == rhs))
                    bad.emplace_back(x, y);
            }
        return bad;
    }

private:
    F field_;
    TripleForm form_;
    std::size_t b_;
};

} // namespace qtorsion
