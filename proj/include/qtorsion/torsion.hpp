#pragma once

#include <optional>
#include <vector>

#include "complexes.hpp"
#include "sign_class.hpp"

namespace qtorsion {

/**
 * Internal choices of the torsion definition.
 *
 * Without an Rng the image bases are pivot columns of the boundaries and the
 * lifts are the matching standard vectors. With an Rng every image basis is
 * multiplied by a random invertible matrix and every lift is shifted by a
 * random cycle; the torsion must not change.
 */
struct TorsionChoices
{
    Rng* rng = nullptr;
};

namespace detail {

template <class F>
Matrix<typename F::value_type> random_invertible(const F& field, std::size_t n, Rng& rng)
{
    for (;;) {
        auto g = zeros(field, n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                g(i, j) = field.random(rng);
        if (!field.is_zero(determinant(field, g)))
            return g;
    }
}

template <class F>
Matrix<typename F::value_type> random_matrix(const F& field, std::size_t r, std::size_t c, Rng& rng)
{
    auto g = zeros(field, r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            g(i, j) = field.random(rng);
    return g;
}

/// Basis of im d, possibly randomized.
template <class F>
Matrix<typename F::value_type> choose_image(const F& field, const Matrix<typename F::value_type>& d,
                                            const TorsionChoices& ch)
{
    auto b = image_basis(field, d);
    if (ch.rng)
        b = b * random_invertible(field, b.cols(), *ch.rng);
    return b;
}

/// Some L with d L = b, possibly shifted by random elements of ker d.
template <class F>
Matrix<typename F::value_type> choose_lift(const F& field, const Matrix<typename F::value_type>& d,
                                           const Matrix<typename F::value_type>& b, const TorsionChoices& ch)
{
    auto l = solve(field, d, b);
    if (!l)
        throw InternalError("image basis vector has no preimage");
    if (ch.rng) {
        const auto k = kernel_basis(field, d);
        *l = *l + k * random_matrix(field, k.cols(), b.cols(), *ch.rng);
    }
    return *l;
}

} // namespace detail

/**
 * Milnor torsion  τ = ∏_k det[h_k | b_k | l_k]^{(-1)^k}  where b_k spans
 * im d_{k+1} ⊂ C_k and l_k lifts b_{k-1} through d_k. Determinants are taken
 * in the preferred (standard) basis of C_k.
 */
template <class F>
typename F::value_type milnor_torsion_value(const F& field, const BasedChainComplex<typename F::value_type>& c,
                                            const std::vector<Matrix<typename F::value_type>>& h,
                                            const TorsionChoices& ch = {})
{
    c.check_shapes();
    if (h.size() != c.ranks.size())
        throw InputError("homology basis has " + std::to_string(h.size()) + " degrees, complex has " +
                             std::to_string(c.ranks.size()),
                         "basis");
    auto tau = field.one();
    Matrix<typename F::value_type> prev_b = zeros(field, 0, 0);
    for (std::size_t k = 0; k < c.ranks.size(); ++k) {
        const long kl = static_cast<long>(k);
        const auto dk = c.boundary(kl);
        if (h[k].rows() != c.ranks[k] || !(dk * h[k]).is_zero())
            throw InputError("homology representatives in degree " + std::to_string(k) + " are not cycles",
                             "basis");
        const auto b = detail::choose_image(field, c.boundary(kl + 1), ch);
        const auto l = k == 0 ? zeros(field, c.ranks[0], 0) : detail::choose_lift(field, dk, prev_b, ch);
        const auto m = hstack(hstack(h[k], b), l);
        if (!m.is_square())
            throw InputError("homology basis in degree " + std::to_string(k) + " has " +
                                 std::to_string(h[k].cols()) + " vectors, expected " +
                                 std::to_string(c.ranks[k] - b.cols() - l.cols()),
                             "basis");
        const auto det = determinant(field, m);
        if (field.is_zero(det))
            throw InputError("homology classes in degree " + std::to_string(k) + " are not a basis", "basis");
        tau = k % 2 == 0 ? tau * det : tau / det;
        prev_b = b;
    }
    return tau;
}

template <class F>
SignClass<typename F::value_type> milnor_torsion(const F& field, const BasedChainComplex<typename F::value_type>& c,
                                                 const std::vector<Matrix<typename F::value_type>>& h,
                                                 const TorsionChoices& ch = {})
{
    return SignClass<typename F::value_type>(milnor_torsion_value(field, c, h, ch));
}

/// Empty homology bases for an acyclic complex.
template <class F>
std::vector<Matrix<typename F::value_type>> empty_homology(const F& field, const std::vector<std::size_t>& ranks)
{
    std::vector<Matrix<typename F::value_type>> h;
    for (auto r : ranks)
        h.push_back(zeros(field, r, 0));
    return h;
}

template <class T>
struct BasisChangeResult
{
    T direct;    ///< τ(C, c', h') computed from the transformed complex
    T predicted; ///< τ(C, c, h) · ∏ (det R_k / det P_k)^{(-1)^k}
    bool agree;
};

/**
 * Torsion after a change of preferred and homology bases.
 *
 * p[k] has the new chain basis c'_k as columns in c_k coordinates; r[k] has
 * the new homology basis h'_k as columns in h_k coordinates. The transformed
 * complex is d'_k = p[k-1]^{-1} d_k p[k] with representatives p[k]^{-1} h_k r[k].
 */
template <class F>
BasisChangeResult<typename F::value_type>
torsion_basis_change(const F& field, const BasedChainComplex<typename F::value_type>& c,
                     const std::vector<Matrix<typename F::value_type>>& h,
                     const std::vector<Matrix<typename F::value_type>>& p,
                     const std::vector<Matrix<typename F::value_type>>& r)
{
    const std::size_t n = c.ranks.size();
    if (p.size() != n || r.size() != n)
        throw InputError("basis change needs one matrix per degree", "basis");
    std::vector<Matrix<typename F::value_type>> pinv;
    auto factor = field.one();
    for (std::size_t k = 0; k < n; ++k) {
        auto inv = inverse(field, p[k]);
        if (!inv || p[k].rows() != c.ranks[k])
            throw InputError("singular chain basis change in degree " + std::to_string(k), "basis");
        auto detr = r[k].is_square() && r[k].rows() == h[k].cols() ? determinant(field, r[k]) : field.zero();
        if (field.is_zero(detr))
            throw InputError("singular homology basis change in degree " + std::to_string(k), "basis");
        const auto q = detr / determinant(field, p[k]);
        factor = k % 2 == 0 ? factor * q : factor / q;
        pinv.push_back(*inv);
    }
    BasedChainComplex<typename F::value_type> c2{c.ranks, {}, c.zero};
    for (std::size_t k = 1; k < n; ++k)
        c2.d.push_back(pinv[k - 1] * c.d[k - 1] * p[k]);
    std::vector<Matrix<typename F::value_type>> h2;
    for (std::size_t k = 0; k < n; ++k)
        h2.push_back(pinv[k] * h[k] * r[k]);
    const auto direct = milnor_torsion_value(field, c2, h2);
    const auto predicted = milnor_torsion_value(field, c, h) * factor;
    return {direct, predicted, SignClass(direct) == SignClass(predicted)};
}

inline constexpr const char* kNotNarrow = "torsion undefined, complex not narrow";

/**
 * τ_2 = det[b_0 | l(b_1)] / det[b_1 | l(b_0)] with b_0 spanning im d_oe ⊂ C_even,
 * b_1 spanning im d_eo ⊂ C_odd and l a section of the relevant map.
 */
template <class F>
typename F::value_type periodic_torsion_value(const F& field, const PeriodicComplex<typename F::value_type>& c,
                                              const TorsionChoices& ch = {})
{
    if (!is_acyclic(field, c))
        throw NotNarrowError(kNotNarrow, "periodic");
    const auto b0 = detail::choose_image(field, c.d_oe, ch);
    const auto b1 = detail::choose_image(field, c.d_eo, ch);
    const auto l1 = detail::choose_lift(field, c.d_eo, b1, ch); // in C_even
    const auto l0 = detail::choose_lift(field, c.d_oe, b0, ch); // in C_odd
    const auto even = determinant(field, hstack(b0, l1));
    const auto odd = determinant(field, hstack(b1, l0));
    if (field.is_zero(even) || field.is_zero(odd))
        throw InternalError("degenerate periodic torsion bases");
    return even / odd;
}

template <class F>
SignClass<typename F::value_type> periodic_torsion(const F& field, const PeriodicComplex<typename F::value_type>& c,
                                                   const TorsionChoices& ch = {})
{
    return SignClass<typename F::value_type>(periodic_torsion_value(field, c, ch));
}

/// Torsion of the folded pearl complex in critical-point bases.
template <class F>
SignClass<typename F::value_type> quantum_torsion(const F& field, const PearlComplex<typename F::value_type>& p)
{
    return periodic_torsion(field, fold_periodic(p));
}

/// ∏_k |Tor H_k|^{(-1)^k} as a field element.
template <class F>
typename F::value_type torsion_ratio(const F& field, const IntegralHomology& h)
{
    return field.from_fraction(h.torsion_order(0), h.torsion_order(1));
}

template <class T>
struct TorsionIdentity
{
    SignClass<T> milnor;
    SignClass<T> ratio;
    bool agree;
};

/// Compares τ(C ⊗ F, h ⊗ 1) with ∏|Tor H_k|^{(-1)^k} for an integral Morse complex.
template <class F>
TorsionIdentity<typename F::value_type> morse_torsion_identity(const F& field, const IntegerComplex& c,
                                                               const FieldSpec& spec)
{
    const auto [hom, basis] = integral_homology(c);
    require_admissible(hom, spec);
    std::vector<Matrix<typename F::value_type>> h;
    for (const auto& r : basis.reps)
        h.push_back(to_field(field, r));
    const SignClass<typename F::value_type> tau(milnor_torsion_value(field, to_field(field, c), h));
    const SignClass<typename F::value_type> ratio(torsion_ratio(field, hom));
    return {tau, ratio, tau == ratio};
}

} // namespace qtorsion
