#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "linear_system.hpp"
#include "spectral.hpp"
#include "threefold_ring.hpp"

namespace qtorsion {

/// A based complex together with a basis of its homology.
template <class T>
struct ComplexWithHomology
{
    BasedChainComplex<T> complex;
    std::vector<Matrix<T>> homology;
};

/**
 * Random based complex over a field with prescribed boundary ranks rho[k]
 * (rho[0] = rho[n+1] = 0 implicit) and homology dimensions h[k].
 *
 * Built in split form, C_k = im ⊕ H ⊕ coim, and scrambled by random
 * invertible basis changes d'_k = P_{k-1}^{-1} d_k P_k.
 */
template <class F>
ComplexWithHomology<typename F::value_type> random_split_complex(const F& field, const std::vector<std::size_t>& rho,
                                                                 const std::vector<std::size_t>& h, Rng& rng)
{
    using M = Matrix<typename F::value_type>;
    const std::size_t n = h.size(); // degrees 0..n-1
    auto boundary_rank = [&](std::size_t k) -> std::size_t { return k >= 1 && k < n ? rho[k - 1] : 0; };
    std::vector<std::size_t> ranks(n);
    for (std::size_t k = 0; k < n; ++k)
        ranks[k] = boundary_rank(k + 1) + h[k] + boundary_rank(k);
    std::vector<M> p, pinv;
    for (std::size_t k = 0; k < n; ++k) {
        p.push_back(detail::random_invertible(field, ranks[k], rng));
        pinv.push_back(*inverse(field, p.back()));
    }
    ComplexWithHomology<typename F::value_type> out{{ranks, {}, field.zero()}, {}};
    for (std::size_t k = 1; k < n; ++k) {
        const std::size_t r = boundary_rank(k);
        auto d = zeros(field, ranks[k - 1], ranks[k]);
        // coim of C_k (last r coordinates) maps onto im of C_{k-1} (first r coordinates).
        d.set_block(0, ranks[k] - r, detail::random_invertible(field, r, rng));
        out.complex.d.push_back(pinv[k - 1] * d * p[k]);
    }
    for (std::size_t k = 0; k < n; ++k) {
        auto e = zeros(field, ranks[k], h[k]);
        for (std::size_t i = 0; i < h[k]; ++i)
            e(boundary_rank(k + 1) + i, i) = field.one();
        out.homology.push_back(pinv[k] * e);
    }
    return out;
}

/// Random acyclic complex with degrees 0..top and every rank at most max_rank.
template <class F>
BasedChainComplex<typename F::value_type> random_acyclic_complex(const F& field, std::size_t top,
                                                                 std::size_t max_rank, Rng& rng)
{
    std::vector<std::size_t> rho(top, 0);
    std::size_t prev = 0;
    for (std::size_t k = 0; k < top; ++k) {
        // rank C_k = rho[k-1] + rho[k] ≤ max_rank; the top rank C_top = rho[top-1].
        const std::size_t room = max_rank - prev;
        rho[k] = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(room)));
        prev = rho[k];
    }
    return random_split_complex(field, rho, std::vector<std::size_t>(top + 1, 0), rng).complex;
}

/// Random unimodular n x n matrix: a product of unit lower and upper triangular factors.
inline std::pair<IntegerMatrix, IntegerMatrix> random_unimodular(std::size_t n, Rng& rng, int spread = 1)
{
    auto lower = int_identity(n), upper = int_identity(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) {
            lower(i, j) = rng.uniform(-spread, spread);
            upper(j, i) = rng.uniform(-spread, spread);
        }
    const auto u = lower * upper;
    const auto inv = inverse(RationalField{}, to_field(RationalField{}, u));
    return {u, inv->map([](const Rational& x) { return BigInt(boost::multiprecision::numerator(x)); })};
}

/// Extra critical points per degree beyond the perfect ranks and torsion pairs.
using Surplus = std::array<std::size_t, 4>;

/**
 * Integral Morse complex realizing 3-fold homology.
 *
 * Coordinates of C_k are [homology | torsion pairs | birth pairs]. Each
 * torsion factor a contributes x in C_2 and y in C_1 with d x = a y. Birth
 * pairs are unit boundaries between adjacent degrees: s_0 pairs (1,0),
 * s_3 pairs (3,2) and s_1 - s_0 = s_2 - s_3 pairs (2,1). All chain groups are
 * then scrambled by random unimodular matrices.
 */
inline IntegerComplex realize_morse(const ThreefoldHomology& h, const Surplus& s, Rng& rng, bool scramble = true)
{
    if (s[1] < s[0] || s[2] < s[3] || s[1] - s[0] != s[2] - s[3])
        throw InputError("surplus (" + std::to_string(s[0]) + "," + std::to_string(s[1]) + "," +
                             std::to_string(s[2]) + "," + std::to_string(s[3]) +
                             ") violates the Morse relations s1 - s0 = s2 - s3 >= 0",
                         "surplus");
    for (const auto& a : h.torsion)
        if (a < 2)
            throw InputError("torsion factor " + a.str() + " must be at least 2", "torsion");
    const std::size_t t = h.torsion.size();
    const std::size_t n01 = s[0], n12 = s[1] - s[0], n23 = s[3];
    const std::array<std::size_t, 4> ranks{1 + n01, h.b + t + n01 + n12, h.b + t + n12 + n23, 1 + n23};
    IntegerComplex c{{ranks[0], ranks[1], ranks[2], ranks[3]},
                     {int_matrix(ranks[0], ranks[1]), int_matrix(ranks[1], ranks[2]), int_matrix(ranks[2], ranks[3])},
                     BigInt(0)};
    // Offsets of each block inside C_k.
    const std::size_t c0_birth01 = 1;
    const std::size_t c1_tor = h.b, c1_birth01 = h.b + t, c1_birth12 = h.b + t + n01;
    const std::size_t c2_tor = h.b, c2_birth12 = h.b + t, c2_birth23 = h.b + t + n12;
    const std::size_t c3_birth23 = 1;
    for (std::size_t i = 0; i < t; ++i)
        c.d[1](c1_tor + i, c2_tor + i) = h.torsion[i];
    for (std::size_t i = 0; i < n01; ++i)
        c.d[0](c0_birth01 + i, c1_birth01 + i) = 1;
    for (std::size_t i = 0; i < n12; ++i)
        c.d[1](c1_birth12 + i, c2_birth12 + i) = 1;
    for (std::size_t i = 0; i < n23; ++i)
        c.d[2](c2_birth23 + i, c3_birth23 + i) = 1;
    if (!scramble)
        return c;
    std::array<IntegerMatrix, 4> u, uinv;
    for (std::size_t k = 0; k < 4; ++k)
        std::tie(u[k], uinv[k]) = random_unimodular(ranks[k], rng);
    for (std::size_t k = 1; k <= 3; ++k)
        c.d[k - 1] = uinv[k - 1] * c.d[k - 1] * u[k];
    return c;
}

/// Page-2 data: b odd, a form with a slice and the vector r with d1*(p) = Σ r_i ē_i.
template <class T>
struct Page2Spec
{
    ThreefoldHomology homology;
    TripleForm form;
    std::vector<T> r;
};

/// Page-3 data: b even, Q' invertible antisymmetric, r ≠ 0, A = r Q'^{-1}.
template <class T>
struct Page3Spec
{
    ThreefoldHomology homology;
    Matrix<T> qprime;
    T r;
};

/// A generated instance with the data its generator prescribed.
template <class T>
struct GeneratedPearl
{
    int page = 0; ///< 2 or 3, or 0 for random_pearl
    ThreefoldHomology homology;
    TripleForm form;
    IntegerComplex morse;
    HomologyBasis basis; ///< integral homology representatives of the Morse complex
    PearlComplex<T> pearl;
    std::array<Matrix<T>, 3> d1star; ///< prescribed homology-level derivation
    std::optional<T> rate;           ///< prescribed page-2 rate (page 3 only)
    std::size_t attempts = 0;        ///< lift samples drawn, at most kLiftRetries
};

inline constexpr std::size_t kLiftRetries = 32;
inline constexpr const char* kNotPage2 = "not page-2 narrow";
inline constexpr const char* kOddAntisymmetric = "no invertible antisymmetric matrix of odd size";

/**
 * Solves the Leibniz rule on H_*(L; F) for D = d1* : H_1 -> H_2, given
 * d1*(p) = Σ r_i ē_i and d1*(e_i) = s_i [L]. D(ē_k) = Σ_l D_lk e_l. The
 * equations, one per basis pair, are
 *   (e_i, e_j):  Σ_k I_ijk D_lk = s_i δ_jl − s_j δ_il
 *   (e_i, ē_j):  δ_ij r_k = s_i δ_jk − Σ_l D_lj I_ilk
 *   (ē_i, e_j):  δ_ij r_k = Σ_l D_li I_ljk + s_j δ_ik
 *   (ē_i, ē_j):  D_ij + D_ji = 0
 * together with d1*² = 0, i.e. D r = 0 and sᵀ D = 0. The pairs (p, e_j)
 * force r = s, so s is taken equal to r.
 */
template <class F>
std::optional<Matrix<typename F::value_type>> solve_leibniz(const F& field, const TripleForm& form,
                                                            const std::vector<typename F::value_type>& r,
                                                            Rng* rng = nullptr)
{
    const std::size_t b = form.b();
    LinearSystem<F> sys(field);
    const auto D = sys.add_block(b, b);
    auto I = [&](std::size_t i, std::size_t j, std::size_t k) { return field.from_integer(form(i, j, k)); };
    auto delta = [&](std::size_t i, std::size_t j) { return i == j ? field.one() : field.zero(); };
    using E = typename LinearSystem<F>::Entry;
    for (std::size_t i = 0; i < b; ++i)
        for (std::size_t j = 0; j < b; ++j)
            for (std::size_t l = 0; l < b; ++l) {
                std::vector<E> eq;
                for (std::size_t k = 0; k < b; ++k)
                    if (!field.is_zero(I(i, j, k)))
                        eq.push_back({D, l, k, I(i, j, k)});
                sys.add_scalar_equation(eq, r[i] * delta(j, l) - r[j] * delta(i, l));
            }
    for (std::size_t i = 0; i < b; ++i)
        for (std::size_t j = 0; j < b; ++j)
            for (std::size_t k = 0; k < b; ++k) {
                std::vector<E> a, c;
                for (std::size_t l = 0; l < b; ++l) {
                    if (!field.is_zero(I(i, l, k)))
                        a.push_back({D, l, j, I(i, l, k)});
                    if (!field.is_zero(I(l, j, k)))
                        c.push_back({D, l, i, I(l, j, k)});
                }
                sys.add_scalar_equation(a, r[i] * delta(j, k) - delta(i, j) * r[k]);
                sys.add_scalar_equation(c, delta(i, j) * r[k] - r[j] * delta(i, k));
            }
    for (std::size_t i = 0; i < b; ++i)
        for (std::size_t j = i; j < b; ++j)
            sys.add_scalar_equation({{D, i, j, field.one()}, {D, j, i, field.one()}}, field.zero());
    auto rv = zeros(field, b, 1);
    for (std::size_t i = 0; i < b; ++i)
        rv(i, 0) = r[i];
    sys.add_equation({sys.right(D, rv)}, zeros(field, b, 1));
    sys.add_equation({sys.left(D, rv.transpose())}, zeros(field, 1, b));
    auto sol = sys.solve(rng);
    if (!sol)
        return std::nullopt;
    return sol->blocks[D];
}

namespace detail {

template <class F>
DegreeBasis<typename F::value_type> field_basis(const F& field, const HomologyBasis& basis)
{
    DegreeBasis<typename F::value_type> h;
    for (const auto& r : basis.reps)
        h.push_back(to_field(field, r));
    return h;
}

/// Checks the Morse complex against the prescribed homology and returns its integral basis.
inline HomologyBasis morse_basis(const IntegerComplex& morse, const ThreefoldHomology& th, const FieldSpec& spec)
{
    const auto [hom, basis] = integral_homology(morse);
    require_admissible(hom, spec);
    BigInt order(1), want(1);
    for (const auto& a : hom.factors[1])
        order *= a;
    for (const auto& a : th.torsion)
        want *= a;
    if (hom.free_rank != std::vector<std::size_t>{1, th.b, th.b, 1} || order != want || !hom.factors[0].empty() ||
        !hom.factors[2].empty() || !hom.factors[3].empty())
        throw InputError("Morse complex does not realize the prescribed homology", "morse");
    return basis;
}

} // namespace detail

/**
 * Chain-level d1 inducing the prescribed d1* and anticommuting with d_M,
 * sampled from the affine solution space, and a compatible d2.
 *
 * Unknowns X_k = d1 on C_k and Y_k with X_k h_k − d_M Y_k = h_{k+1} d1*_k.
 * d2 solves d_M d2 = −d1 d1 on C_0 and d2 d_M = −d1 d1 on C_1; if a page-2
 * rate r is prescribed also d2 h_0 − d1 y = r h_3 where d_M y = d1 h_0.
 */
template <class F>
std::optional<PearlComplex<typename F::value_type>>
lift_chain(const F& field, const PearlComplex<typename F::value_type>& base,
           const DegreeBasis<typename F::value_type>& h, const std::array<Matrix<typename F::value_type>, 3>& dstar,
           const std::optional<typename F::value_type>& rate, Rng& rng)
{
    using M = Matrix<typename F::value_type>;
    LinearSystem<F> sys(field);
    std::array<std::size_t, 3> X{};
    for (long k = 0; k <= 2; ++k)
        X[k] = sys.add_block(base.rank(k + 1), base.rank(k));
    const auto Y0 = sys.add_block(base.rank(2), h[0].cols());
    const auto Y1 = sys.add_block(base.rank(3), h[1].cols());
    // Anticommutation on C_0 .. C_3.
    sys.add_equation({sys.left(X[0], base.dM(1))}, zeros(field, base.rank(0), base.rank(0)));
    sys.add_equation({sys.left(X[1], base.dM(2)), sys.right(X[0], base.dM(1))},
                     zeros(field, base.rank(1), base.rank(1)));
    sys.add_equation({sys.left(X[2], base.dM(3)), sys.right(X[1], base.dM(2))},
                     zeros(field, base.rank(2), base.rank(2)));
    sys.add_equation({sys.right(X[2], base.dM(3))}, zeros(field, base.rank(3), base.rank(3)));
    // Induced map on homology.
    sys.add_equation({sys.right(X[0], h[0]), sys.left(Y0, -base.dM(2))}, h[1] * dstar[0]);
    sys.add_equation({sys.right(X[1], h[1]), sys.left(Y1, -base.dM(3))}, h[2] * dstar[1]);
    sys.add_equation({sys.right(X[2], h[2])}, h[3] * dstar[2]);
    const auto sol = sys.solve(&rng);
    if (!sol)
        return std::nullopt;
    PearlComplex<typename F::value_type> p = base;
    for (std::size_t k = 0; k < 3; ++k)
        p.d1[k] = sol->blocks[X[k]];

    LinearSystem<F> s2(field);
    const auto Z = s2.add_block(p.rank(3), p.rank(0));
    s2.add_equation({s2.left(Z, p.dM(3))}, -(p.D1(1) * p.D1(0)));
    s2.add_equation({s2.right(Z, p.dM(1))}, -(p.D1(2) * p.D1(1)));
    if (rate) {
        const auto y = solve(field, p.dM(2), p.D1(0) * h[0]);
        if (!y)
            return std::nullopt;
        const M target = (*rate) * h[3] + p.D1(2) * *y;
        s2.add_equation({s2.right(Z, h[0])}, target);
    }
    const auto sol2 = s2.solve(&rng);
    if (!sol2)
        return std::nullopt;
    p.d2 = sol2->blocks[Z];
    if (!validate_pearl(p).empty())
        throw InternalError("lifted pearl complex violates D^2 = 0");
    return p;
}

namespace detail {

template <class F>
GeneratedPearl<typename F::value_type> lift_with_retries(const F& field, const IntegerComplex& morse,
                                                         const HomologyBasis& basis,
                                                         const std::array<Matrix<typename F::value_type>, 3>& dstar,
                                                         const std::optional<typename F::value_type>& rate,
                                                         std::uint64_t seed)
{
    GeneratedPearl<typename F::value_type> g;
    g.morse = morse;
    g.basis = basis;
    g.d1star = dstar;
    g.rate = rate;
    const auto base = pearl_from_morse(field, morse);
    const auto h = field_basis(field, basis);
    Rng rng = Rng(seed).split("lift");
    for (std::size_t attempt = 1; attempt <= kLiftRetries; ++attempt) {
        g.attempts = attempt;
        if (auto p = lift_chain(field, base, h, dstar, rate, rng)) {
            g.pearl = *p;
            return g;
        }
    }
    throw InputError("linear lift infeasible after " + std::to_string(kLiftRetries) + " samples", "lift");
}

} // namespace detail

/**
 * Page-2 pearl complex: d1*(p) = Σ r_i ē_i, d1*(e_i) = r_i [L] and D : H_1 -> H_2
 * from the Leibniz rule. Rejects specs whose page-1 sequence is not exact.
 */
template <class F>
GeneratedPearl<typename F::value_type> lift_derivation_page2(const F& field, const Page2Spec<typename F::value_type>& spec,
                                                             const IntegerComplex& morse, const FieldSpec& fs,
                                                             std::uint64_t seed)
{
    const std::size_t b = spec.homology.b;
    if (spec.form.b() != b || spec.r.size() != b)
        throw InputError("page-2 spec dimensions disagree with b = " + std::to_string(b), "spec");
    const auto basis = detail::morse_basis(morse, spec.homology, fs);
    const auto D = solve_leibniz(field, spec.form, spec.r);
    if (!D)
        throw InputError(std::string(kNotPage2) + ": the Leibniz rule has no solution for this form and r", "spec");
    auto rv = zeros(field, b, 1);
    for (std::size_t i = 0; i < b; ++i)
        rv(i, 0) = spec.r[i];
    if (rank(field, rv) != 1 || rank(field, *D) + 1 != b)
        throw InputError(std::string(kNotPage2) + ": the page-1 sequence is not exact", "spec");
    auto g = detail::lift_with_retries(field, morse, basis, {rv, *D, rv.transpose()}, std::nullopt, seed);
    g.page = 2;
    g.homology = spec.homology;
    g.form = spec.form;
    return g;
}

/// Page-3 pearl complex: d1* = A = r Q'^{-1} on H_1 -> H_2, zero elsewhere, page-2 rate r.
template <class F>
GeneratedPearl<typename F::value_type> lift_derivation_page3(const F& field, const Page3Spec<typename F::value_type>& spec,
                                                             const IntegerComplex& morse, const FieldSpec& fs,
                                                             std::uint64_t seed)
{
    const std::size_t b = spec.homology.b;
    if (b % 2 == 1)
        throw InputError(kOddAntisymmetric, "b");
    if (spec.qprime.rows() != b || spec.qprime.cols() != b)
        throw InputError("Q' must be " + std::to_string(b) + "x" + std::to_string(b), "spec");
    if (!(spec.qprime.transpose() == -spec.qprime))
        throw InputError("Q' is not antisymmetric", "spec");
    if (field.is_zero(spec.r))
        throw InputError("page-3 rate r must be nonzero", "spec");
    const auto qinv = inverse(field, spec.qprime);
    if (!qinv)
        throw InputError("Q' is singular", "spec");
    const auto basis = detail::morse_basis(morse, spec.homology, fs);
    const auto A = spec.r * *qinv;
    auto g = detail::lift_with_retries(field, morse, basis, {zeros(field, b, 1), A, zeros(field, 1, b)}, spec.r, seed);
    g.page = 3;
    g.homology = spec.homology;
    g.form = TripleForm(b);
    return g;
}

/// Random antisymmetric b x b integer matrix, invertible over the field (b even).
template <class F>
IntegerMatrix random_antisymmetric(const F& field, std::size_t b, Rng& rng, int spread = 2)
{
    if (b % 2 == 1)
        throw InputError(kOddAntisymmetric, "b");
    for (;;) {
        auto m = int_matrix(b, b);
        for (std::size_t i = 0; i < b; ++i)
            for (std::size_t j = i + 1; j < b; ++j) {
                m(i, j) = rng.uniform(-spread, spread);
                m(j, i) = -m(i, j);
            }
        if (!field.is_zero(determinant(field, to_field(field, m))))
            return m;
    }
}

/// Block diagonal sum of [[0, 1], [-1, 0]].
inline IntegerMatrix standard_symplectic(std::size_t b)
{
    if (b % 2 == 1)
        throw InputError(kOddAntisymmetric, "b");
    auto m = int_matrix(b, b);
    for (std::size_t i = 0; i + 1 < b; i += 2) {
        m(i, i + 1) = 1;
        m(i + 1, i) = -1;
    }
    return m;
}

/// Nonzero integer in [-n, n] whose image in the field is nonzero.
template <class F>
BigInt random_unit_integer(const F& field, Rng& rng, int n = 3)
{
    for (;;) {
        const BigInt v(rng.uniform(-n, n));
        if (!field.is_zero(field.from_integer(v)))
            return v;
    }
}

/**
 * Page-2 spec in a random basis: the canonical I = e^1 ∧ ω with ω invertible
 * antisymmetric on the complement and r = (r_1, 0, ..., 0), moved by a random
 * g ∈ GL(b, Z): I' = g·I, r' = gᵀ r.
 */
template <class F>
Page2Spec<typename F::value_type> random_page2_spec(const F& field, std::size_t b, std::vector<BigInt> torsion,
                                                    Rng& rng, bool scramble = true)
{
    if (b % 2 == 0)
        throw InputError("page-2 instances need odd b", "b");
    TripleForm form(b);
    if (b >= 3) {
        const auto w = random_antisymmetric(field, b - 1, rng);
        for (std::size_t j = 0; j + 1 < b; ++j)
            for (std::size_t k = j + 1; k + 1 < b; ++k)
                form.set(0, j + 1, k + 1, w(j, k));
    }
    std::vector<BigInt> r(b, BigInt(0));
    r[0] = random_unit_integer(field, rng);
    if (scramble && b > 1) {
        const auto [g, ginv] = random_unimodular(b, rng);
        form = form.transform(g);
        std::vector<BigInt> r2(b, BigInt(0));
        for (std::size_t i = 0; i < b; ++i)
            for (std::size_t a = 0; a < b; ++a)
                r2[i] += g(a, i) * r[a];
        r = r2;
    }
    Page2Spec<typename F::value_type> spec{{b, std::move(torsion)}, form, {}};
    for (const auto& x : r)
        spec.r.push_back(field.from_integer(x));
    return spec;
}

template <class F>
Page3Spec<typename F::value_type> random_page3_spec(const F& field, std::size_t b, std::vector<BigInt> torsion,
                                                    Rng& rng)
{
    return {{b, std::move(torsion)}, to_field(field, random_antisymmetric(field, b, rng)),
            field.from_integer(random_unit_integer(field, rng))};
}

struct RandomPearlOptions
{
    const TripleForm* form = nullptr; ///< impose the Leibniz rule for this form
    bool enforce_duality = false;     ///< d1*_{H_2 -> H_3} = d1*_{H_0 -> H_1}ᵀ (implied by a form)
};

/**
 * Random pearl complex on a Morse complex with 3-fold homology: a random
 * homology-level d1* with d1*² = 0 (and the Leibniz rule when a form is
 * given), lifted to chain level with random free parameters and a random
 * compatible d2. Narrowness is not guaranteed.
 */
template <class F>
GeneratedPearl<typename F::value_type> random_pearl(const F& field, const IntegerComplex& morse, const FieldSpec& fs,
                                                    std::uint64_t seed, const RandomPearlOptions& opt = {})
{
    using T = typename F::value_type;
    const auto [hom, basis] = integral_homology(morse);
    require_admissible(hom, fs);
    if (hom.free_rank.size() != 4 || hom.free_rank[0] != 1 || hom.free_rank[3] != 1 ||
        hom.free_rank[1] != hom.free_rank[2])
        throw InputError("random_pearl needs Betti numbers (1, b, b, 1)", "morse");
    const std::size_t b = hom.free_rank[1];
    if (opt.form && opt.form->b() != b)
        throw InputError("form dimension differs from b", "form");
    Rng rng = Rng(seed).split("random_pearl");
    std::array<Matrix<T>, 3> dstar;
    for (int attempt = 0;; ++attempt) {
        auto r = zeros(field, b, 1);
        if (attempt < 8 && rng.chance(1, 2))
            for (std::size_t i = 0; i < b; ++i)
                r(i, 0) = field.random(rng);
        auto s = r;
        if (!opt.form && !opt.enforce_duality && rng.chance(1, 2))
            for (std::size_t i = 0; i < b; ++i)
                s(i, 0) = field.random(rng);
        std::optional<Matrix<T>> D;
        if (opt.form) {
            std::vector<T> rv;
            for (std::size_t i = 0; i < b; ++i)
                rv.push_back(r(i, 0));
            D = solve_leibniz(field, *opt.form, rv, &rng);
        } else {
            LinearSystem<F> sys(field);
            const auto X = sys.add_block(b, b);
            sys.add_equation({sys.right(X, r)}, zeros(field, b, 1));
            sys.add_equation({sys.left(X, s.transpose())}, zeros(field, 1, b));
            if (auto sol = sys.solve(&rng))
                D = sol->blocks[X];
        }
        if (!D)
            continue;
        dstar = {r, *D, s.transpose()};
        break;
    }
    ThreefoldHomology th{b, hom.factors[1]};
    auto g = detail::lift_with_retries(field, morse, basis, dstar, std::nullopt, seed);
    g.homology = th;
    g.form = opt.form ? *opt.form : TripleForm(b);
    return g;
}

/// Generation parameters shared by the CLI and the batch driver.
struct GenerateOptions
{
    int page = 2;
    std::size_t b = 3;
    std::vector<BigInt> torsion;
    Surplus surplus{0, 0, 0, 0};
    std::uint64_t seed = 0;
    bool scramble = true;
};

/// Morse complex, spec and lift from a single seed.
template <class F>
GeneratedPearl<typename F::value_type> generate_instance(const F& field, const FieldSpec& fs,
                                                         const GenerateOptions& o)
{
    Rng root(o.seed);
    Rng morse_rng = root.split("morse"), spec_rng = root.split("spec");
    const ThreefoldHomology th{o.b, o.torsion};
    require_admissible(th.integral(), fs);
    const auto morse = realize_morse(th, o.surplus, morse_rng, o.scramble);
    if (o.page == 2)
        return lift_derivation_page2(field, random_page2_spec(field, o.b, o.torsion, spec_rng, o.scramble), morse,
                                     fs, root.split("lift").seed());
    if (o.page == 3)
        return lift_derivation_page3(field, random_page3_spec(field, o.b, o.torsion, spec_rng), morse, fs,
                                     root.split("lift").seed());
    throw InputError("page must be 2 or 3", "page");
}

} // namespace qtorsion
