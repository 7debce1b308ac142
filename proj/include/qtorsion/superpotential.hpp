#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "laurent.hpp"
#include "linalg.hpp"
#include "spectral.hpp"

namespace qtorsion {

/// A disc class: boundary ∂A in H_1/Tor and the count m_0(A).
struct Disc
{
    std::vector<std::int64_t> boundary;
    BigInt m0;
};

struct DiscSystem
{
    std::size_t b = 0;
    std::vector<Disc> discs;

    void check() const
    {
        for (std::size_t i = 0; i < discs.size(); ++i)
            if (discs[i].boundary.size() != b)
                throw InputError("disc " + std::to_string(i) + " has a boundary of length " +
                                     std::to_string(discs[i].boundary.size()) + ", expected " + std::to_string(b),
                                 "discs[" + std::to_string(i) + "]");
    }
};

/// W = Σ m_0(A) z^{∂A}; colliding boundaries add.
inline LaurentPolynomial build_potential(const DiscSystem& d)
{
    d.check();
    LaurentPolynomial w(d.b);
    for (const auto& disc : d.discs)
        w.add_term(disc.boundary, disc.m0);
    return w;
}

template <class F>
void check_representation(const F& field, std::size_t b, const std::vector<typename F::value_type>& z)
{
    if (z.size() != b)
        throw InputError("representation has " + std::to_string(z.size()) + " coordinates, expected " +
                             std::to_string(b),
                         "representation");
    for (std::size_t i = 0; i < z.size(); ++i)
        if (field.is_zero(z[i]))
            throw InputError("representation coordinate z" + std::to_string(i + 1) + " is zero", "representation");
}

/// z_i ∂W/∂z_i at z.
template <class F>
std::vector<typename F::value_type> log_gradient(const F& field, const LaurentPolynomial& w,
                                                 const std::vector<typename F::value_type>& z)
{
    check_representation(field, w.variables(), z);
    std::vector<typename F::value_type> g;
    for (std::size_t i = 0; i < w.variables(); ++i)
        g.push_back(w.log_partial(i).evaluate(field, z));
    return g;
}

/// ∂²W/∂z_i∂z_j at z.
template <class F>
Matrix<typename F::value_type> hessian(const F& field, const LaurentPolynomial& w,
                                       const std::vector<typename F::value_type>& z)
{
    check_representation(field, w.variables(), z);
    const std::size_t b = w.variables();
    auto h = zeros(field, b, b);
    for (std::size_t i = 0; i < b; ++i) {
        const auto wi = w.partial(i);
        for (std::size_t j = 0; j < b; ++j)
            h(i, j) = wi.partial(j).evaluate(field, z);
    }
    return h;
}

template <class F>
bool is_critical(const F& field, const LaurentPolynomial& w, const std::vector<typename F::value_type>& z)
{
    for (const auto& x : log_gradient(field, w, z))
        if (!field.is_zero(x))
            return false;
    return true;
}

inline constexpr const char* kNotCritical = "discriminant undefined: representation is not a critical point";

/// Δ = (-1)^{n b + 1} z_1^2 ... z_b^2 det Hess W, defined at critical points only.
template <class F>
typename F::value_type discriminant(const F& field, const LaurentPolynomial& w,
                                    const std::vector<typename F::value_type>& z, std::size_t n = 3)
{
    if (!is_critical(field, w, z))
        throw InputError(kNotCritical, "representation");
    auto v = determinant(field, hessian(field, w, z));
    for (const auto& x : z)
        v = v * x * x;
    return (n * w.variables() + 1) % 2 == 0 ? v : decltype(v)(-v);
}

template <class T>
struct DiscDifferential
{
    Matrix<T> h2_to_h3; ///< 1 x b: d1*(e_i) = column i times [L]
    Matrix<T> h0_to_h1; ///< b x 1: d1*(p) = Σ_i row i times ē_i
    bool dual = false;  ///< h0_to_h1 = h2_to_h3ᵀ
};

/// Divisor axiom: both maps have entries Σ_A m_0(A) φ(∂A) (∂A)_i.
template <class F>
DiscDifferential<typename F::value_type> d1_from_discs(const F& field, const DiscSystem& d,
                                                       const std::vector<typename F::value_type>& z)
{
    d.check();
    check_representation(field, d.b, z);
    DiscDifferential<typename F::value_type> out{zeros(field, 1, d.b), zeros(field, d.b, 1), false};
    for (const auto& disc : d.discs) {
        const auto phi = LaurentPolynomial::monomial(disc.boundary, disc.m0).evaluate(field, z);
        for (std::size_t i = 0; i < d.b; ++i) {
            const auto c = phi * field.from_int(disc.boundary[i]);
            out.h2_to_h3(0, i) += c;
            out.h0_to_h1(i, 0) += c;
        }
    }
    out.dual = out.h0_to_h1 == out.h2_to_h3.transpose();
    return out;
}

template <class T>
struct WideNarrowReport
{
    bool is_critical = false;
    std::vector<T> gradient;
    std::optional<T> discriminant;
    bool constant_potential = false; ///< then the gradient and Δ vanish identically
    bool consistent = true;          ///< the observed collapse matches criticality
    std::string note;
};

/**
 * Page-3 collapse needs a critical point; page-2 collapse needs a nonzero
 * gradient entry. A NotNarrow observation imposes nothing.
 */
template <class F>
WideNarrowReport<typename F::value_type> classify_representation(const F& field, const DiscSystem& d,
                                                                 const std::vector<typename F::value_type>& z,
                                                                 Collapse observed)
{
    const auto w = build_potential(d);
    WideNarrowReport<typename F::value_type> r;
    r.gradient = log_gradient(field, w, z);
    r.is_critical = is_critical(field, w, z);
    r.constant_potential = w.is_constant();
    if (r.is_critical)
        r.discriminant = discriminant(field, w, z);
    if (observed == Collapse::Page3 && !r.is_critical) {
        r.consistent = false;
        r.note = "page-3 collapse at a non-critical point of W";
    } else if (observed == Collapse::Page2 && r.is_critical) {
        r.consistent = false;
        r.note = "page-2 collapse at a critical point of W";
    } else if (r.constant_potential) {
        r.note = "W is constant, so the discriminant vanishes identically";
    }
    return r;
}

/**
 * Second-order check at a critical point: the symmetrized products
 * s(i, j) = e_i∘e_j + e_j∘e_i (as multiples of [L]) against (-1)^n z_i z_j ∂_i∂_j W.
 */
template <class F>
bool bico_second_order(const F& field, const LaurentPolynomial& w, const std::vector<typename F::value_type>& z,
                       const Matrix<typename F::value_type>& s, std::size_t n = 3)
{
    const std::size_t b = w.variables();
    if (s.rows() != b || s.cols() != b)
        throw InputError("symmetrized product matrix must be " + std::to_string(b) + "x" + std::to_string(b),
                         "products");
    const auto h = hessian(field, w, z);
    for (std::size_t i = 0; i < b; ++i)
        for (std::size_t j = 0; j < b; ++j) {
            auto v = z[i] * z[j] * h(i, j);
            if (n % 2 == 1)
                v = -v;
            if (!(v == s(i, j)))
                return false;
        }
    return true;
}

} // namespace qtorsion
