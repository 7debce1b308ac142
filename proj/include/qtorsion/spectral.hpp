#pragma once

#include <array>
#include <optional>
#include <vector>

#include "torsion.hpp"

namespace qtorsion {

template <class T>
using DegreeBasis = std::vector<Matrix<T>>; ///< one matrix of column representatives per degree 0..3

namespace detail {

/// Coordinates of a d_M-cycle y in C_k against [H_k | im d_M(k+1)]; returns the H part.
template <class F>
Matrix<typename F::value_type> homology_coordinates(const F& field, const PearlComplex<typename F::value_type>& p,
                                                    const DegreeBasis<typename F::value_type>& h, long k,
                                                    const Matrix<typename F::value_type>& y)
{
    const auto x = solve(field, hstack(h[static_cast<std::size_t>(k)], p.dM(k + 1)), y);
    if (!x)
        throw InternalError("vector is not a cycle of d_M in degree " + std::to_string(k));
    return x->block(0, 0, h[static_cast<std::size_t>(k)].cols(), y.cols());
}

} // namespace detail

/// Throws InputError unless h[k] is a basis of H_k(C, d_M) for k = 0..3.
template <class F>
void check_homology_basis(const F& field, const PearlComplex<typename F::value_type>& p,
                          const DegreeBasis<typename F::value_type>& h)
{
    if (h.size() != 4)
        throw InputError("homology basis needs degrees 0..3", "basis");
    for (long k = 0; k <= 3; ++k) {
        const auto& hk = h[static_cast<std::size_t>(k)];
        const std::string where = "basis[" + std::to_string(k) + "]";
        if (hk.rows() != p.rank(k))
            throw InputError("homology representatives in degree " + std::to_string(k) + " have wrong length",
                             where);
        if (!(p.dM(k) * hk).is_zero())
            throw InputError("homology representatives in degree " + std::to_string(k) + " are not cycles", where);
        const std::size_t betti = p.rank(k) - rank(field, p.dM(k)) - rank(field, p.dM(k + 1));
        if (hk.cols() != betti || rank(field, hstack(hk, p.dM(k + 1))) != betti + rank(field, p.dM(k + 1)))
            throw InputError("classes in degree " + std::to_string(k) + " are not a basis of Morse homology", where);
    }
}

template <class T>
struct PageOne
{
    std::array<std::size_t, 4> ranks{};
    std::array<Matrix<T>, 3> d1star; ///< d1star[k] : H_k -> H_{k+1}
};

/// The differential induced by d1 on d_M-homology, in the bases h.
template <class F>
PageOne<typename F::value_type> page1(const F& field, const PearlComplex<typename F::value_type>& p,
                                      const DegreeBasis<typename F::value_type>& h)
{
    check_homology_basis(field, p, h);
    PageOne<typename F::value_type> out;
    for (std::size_t k = 0; k < 4; ++k)
        out.ranks[k] = h[k].cols();
    for (long k = 0; k <= 2; ++k)
        out.d1star[static_cast<std::size_t>(k)] =
            detail::homology_coordinates(field, p, h, k + 1, p.D1(k) * h[static_cast<std::size_t>(k)]);
    return out;
}

/**
 * The filtered complex behind the degree spectral sequence.
 *
 * V_m = ⊕ C_k over k ≡ m (mod 2), with C_k in filtration p = (m - k)/2.
 * D = d_M + d1 + d2 maps V_m to V_{m-1}; d_M keeps p, d1 lowers it by 1 and
 * d2 by 2. F_p V_m is spanned by the pieces of filtration ≤ p.
 *
 *   Z^r_{p,m} = { x ∈ F_p V_m : D x ∈ F_{p-r} V_{m-1} }
 *   B^r_{p,m} = F_p V_m ∩ D(F_{p+r} V_{m+1})
 *   E^r_{p,m} = Z^r_{p,m} / (Z^{r-1}_{p-1,m} + B^{r-1}_{p,m})
 *
 * C_k sits in the slot (p, m) = (0, 0), (-1, -1), (-1, 0), (-2, -1) for k = 0..3.
 */
template <class F>
class FilteredPearl
{
public:
    using T = typename F::value_type;
    using M = Matrix<T>;

    FilteredPearl(const F& field, const PearlComplex<T>& p) : field_(field), p_(p) {}

    struct Piece
    {
        long k, filt;
        std::size_t offset, dim;
    };

    std::vector<Piece> pieces(long m) const
    {
        std::vector<Piece> out;
        std::size_t off = 0;
        for (long k = 0; k <= 3; ++k)
            if (((m - k) % 2 + 2) % 2 == 0) {
                out.push_back({k, (m - k) / 2, off, p_.rank(k)});
                off += p_.rank(k);
            }
        return out;
    }

    std::size_t dim(long m) const
    {
        std::size_t n = 0;
        for (const auto& pc : pieces(m))
            n += pc.dim;
        return n;
    }

    /// D : V_m -> V_{m-1}.
    M differential(long m) const
    {
        const auto src = pieces(m), dst = pieces(m - 1);
        M d(dim(m - 1), dim(m), field_.zero());
        for (const auto& s : src)
            for (const auto& t : dst) {
                const long gap = t.k - s.k;
                if (gap == -1)
                    d.set_block(t.offset, s.offset, p_.dM(s.k));
                else if (gap == 1)
                    d.set_block(t.offset, s.offset, p_.D1(s.k));
                else if (gap == 3)
                    d.set_block(t.offset, s.offset, p_.D2(s.k));
            }
        return d;
    }

    /// Columns spanning F_p V_m.
    M filtration(long p, long m) const
    {
        std::vector<std::size_t> idx;
        for (const auto& pc : pieces(m))
            if (pc.filt <= p)
                for (std::size_t i = 0; i < pc.dim; ++i)
                    idx.push_back(pc.offset + i);
        return identity(field_, dim(m)).select_columns(idx);
    }

    M Z(long r, long p, long m) const
    {
        const auto fp = filtration(p, m);
        const auto dfp = differential(m) * fp;
        // Rows of V_{m-1} outside F_{p-r} must vanish.
        std::vector<std::size_t> rows;
        for (const auto& pc : pieces(m - 1))
            if (pc.filt > p - r)
                for (std::size_t i = 0; i < pc.dim; ++i)
                    rows.push_back(pc.offset + i);
        return fp * kernel_basis(field_, dfp.select_rows(rows));
    }

    M B(long r, long p, long m) const
    {
        return subspace_intersection(field_, filtration(p, m), differential(m + 1) * filtration(p + r, m + 1));
    }

    M denominator(long r, long p, long m) const
    {
        return subspace_sum(field_, Z(r - 1, p - 1, m), B(r - 1, p, m));
    }

    std::size_t E_dim(long r, long p, long m) const
    {
        return rank(field_, Z(r, p, m)) - rank(field_, denominator(r, p, m));
    }

    /// Columns of Z^r_{p,m} completing a basis of the denominator to one of Z^r_{p,m}.
    M E_representatives(long r, long p, long m) const
    {
        const auto z = image_basis(field_, Z(r, p, m));
        auto acc = image_basis(field_, denominator(r, p, m));
        std::vector<std::size_t> pick;
        for (std::size_t j = 0; j < z.cols(); ++j)
            if (!subspace_contains(field_, acc, z.column(j))) {
                acc = hstack(acc, z.column(j));
                pick.push_back(j);
            }
        return z.select_columns(pick);
    }

    /// E^r dimensions in the slots of C_0, C_1, C_2, C_3.
    std::array<std::size_t, 4> page_ranks(long r) const
    {
        return {E_dim(r, 0, 0), E_dim(r, -1, -1), E_dim(r, -1, 0), E_dim(r, -2, -1)};
    }

private:
    F field_;
    PearlComplex<T> p_;
};

inline constexpr const char* kWrongPattern = "wrong collapse pattern: E^2 is not concentrated in H_0 and H_3, one-dimensional each";

/**
 * The page-2 differential E^2_{0,0} -> E^2_{-2,-1}, as a scalar in the bases
 * h_0 and h_3. A representative x of E^2_{0,0} has C_0 part λ h_0 mod im d_M
 * and D x = μ h_3 in C_3; the rate is μ / λ.
 */
template <class F>
typename F::value_type page2_rate(const F& field, const PearlComplex<typename F::value_type>& p,
                                  const DegreeBasis<typename F::value_type>& h)
{
    check_homology_basis(field, p, h);
    const FilteredPearl<F> fp(field, p);
    if (fp.page_ranks(2) != std::array<std::size_t, 4>{1, 0, 0, 1} || h[0].cols() != 1 || h[3].cols() != 1)
        throw NotNarrowError(kWrongPattern, "spectral");
    const auto x = fp.E_representatives(2, 0, 0);
    const std::size_t r0 = p.rank(0);
    const auto lambda = detail::homology_coordinates(field, p, h, 0, x.block(0, 0, r0, 1))(0, 0);
    const auto dx = fp.differential(0) * x; // rows (C_1, C_3); C_1 part vanishes
    const auto w = dx.block(p.rank(1), 0, p.rank(3), 1);
    const auto mu = detail::homology_coordinates(field, p, h, 3, w)(0, 0);
    if (field.is_zero(mu))
        throw NotNarrowError("not narrow at page 3: the page-2 differential vanishes", "spectral");
    return mu / lambda;
}

/// Splitting C_k = H_k ⊕ B_k ⊕ S_k with B_k = im d_M(k+1) and d_M S_k = B_{k-1} columnwise.
template <class T>
struct AdaptedBasis
{
    DegreeBasis<T> H, B, S;
    std::array<Matrix<T>, 4> T_; ///< [H_k | B_k | S_k]
    std::array<Matrix<T>, 4> Tinv;
};

template <class F>
AdaptedBasis<typename F::value_type> adapted_basis(const F& field, const PearlComplex<typename F::value_type>& p,
                                                   const DegreeBasis<typename F::value_type>& h,
                                                   const TorsionChoices& ch = {})
{
    check_homology_basis(field, p, h);
    AdaptedBasis<typename F::value_type> a;
    a.H = h;
    for (long k = 0; k <= 3; ++k)
        a.B.push_back(detail::choose_image(field, p.dM(k + 1), ch));
    for (long k = 0; k <= 3; ++k)
        a.S.push_back(k == 0 ? zeros(field, p.rank(0), 0)
                             : detail::choose_lift(field, p.dM(k), a.B[static_cast<std::size_t>(k - 1)], ch));
    for (std::size_t k = 0; k < 4; ++k) {
        a.T_[k] = hstack(hstack(a.H[k], a.B[k]), a.S[k]);
        auto inv = a.T_[k].is_square() ? inverse(field, a.T_[k]) : std::nullopt;
        if (!inv)
            throw InputError("basis not adapted in degree " + std::to_string(k), "basis");
        a.Tinv[k] = *inv;
    }
    return a;
}

template <class T>
struct ClosedForm
{
    T alpha, r;
    Matrix<T> M1; ///< B_1 coordinates of d1 h_0
    Matrix<T> M6; ///< H_3 coordinates of d1 S_2
};

/**
 * r = α − M6·M1 read from block matrices in an adapted basis: α is the H_3
 * coordinate of d2 h_0, M1 the B_1 coordinates of d1 h_0, M6 the H_3
 * coordinates of d1 S_2.
 */
template <class F>
ClosedForm<typename F::value_type> closed_form_r([[maybe_unused]] const F& field, const PearlComplex<typename F::value_type>& p,
                                                 const AdaptedBasis<typename F::value_type>& a)
{
    if (a.H[0].cols() != 1 || a.H[3].cols() != 1)
        throw NotNarrowError(kWrongPattern, "spectral");
    const std::size_t b1 = a.B[1].cols(), h1 = a.H[1].cols();
    const auto c1 = a.Tinv[1] * (p.D1(0) * a.H[0]);
    if (!c1.block(0, 0, h1, 1).is_zero() || !c1.block(h1 + b1, 0, a.S[1].cols(), 1).is_zero())
        throw NotNarrowError("block extraction impossible: d1 h_0 is not a d_M-boundary", "spectral");
    const auto M1 = c1.block(h1, 0, b1, 1);
    const auto alpha = (a.Tinv[3] * (p.d2 * a.H[0]))(0, 0);
    const auto M6 = (a.Tinv[3] * (p.D1(2) * a.S[2])).block(0, 0, 1, a.S[2].cols());
    const auto r = alpha - (M6 * M1)(0, 0);
    return {alpha, r, M1, M6};
}

enum class Collapse { Page2, Page3, NotNarrow };

inline const char* collapse_name(Collapse c)
{
    switch (c) {
    case Collapse::Page2: return "Page2";
    case Collapse::Page3: return "Page3";
    default: return "NotNarrow";
    }
}

template <class T>
struct SpectralSummary
{
    std::array<std::size_t, 4> e1{}, e2{}, e3{};
    Collapse collapse = Collapse::NotNarrow;
};

template <class F>
SpectralSummary<typename F::value_type> spectral_summary(const F& field, const PearlComplex<typename F::value_type>& p)
{
    const FilteredPearl<F> fp(field, p);
    SpectralSummary<typename F::value_type> s;
    s.e1 = fp.page_ranks(1);
    s.e2 = fp.page_ranks(2);
    s.e3 = fp.page_ranks(3);
    auto vanish = [](const std::array<std::size_t, 4>& e) { return e[0] + e[1] + e[2] + e[3] == 0; };
    s.collapse = vanish(s.e2) ? Collapse::Page2 : vanish(s.e3) ? Collapse::Page3 : Collapse::NotNarrow;
    return s;
}

/// Page2 iff E^2 = 0, Page3 iff E^2 ≠ 0 = E^3, NotNarrow otherwise.
template <class F>
Collapse collapsing_page(const F& field, const PearlComplex<typename F::value_type>& p)
{
    return spectral_summary(field, p).collapse;
}

/**
 * Minimal model by homological perturbation.
 *
 * On V = ⊕ C_k the splitting gives i : H -> V, p : V -> H and h with
 * h(B_{k-1} e_j) = -S_k e_j, so that i p - 1 = d_M h + h d_M, h i = 0,
 * p h = 0, h h = 0. For t = d1 + d2 and A = t + t h t + t h t h t + ...:
 *   δ = p A i,  i' = i + h A i,  p' = p + p A h,  h' = h + h A h.
 */
template <class T>
struct MinimalModel
{
    PearlComplex<T> model;   ///< d_M = 0, d1 = δ_1, d2 = δ_2
    Matrix<T> i, p, h;       ///< perturbed maps on the total spaces
    Matrix<T> D, delta;      ///< total differentials of the complex and the model
    bool chain_maps = false; ///< D i' = i' δ and p' D = δ p'
    bool retraction = false; ///< p' i' = 1
    bool homotopy = false;   ///< i' p' - 1 = D h' + h' D
    bool square_zero = false;
};

template <class F>
MinimalModel<typename F::value_type> minimal_model(const F& field, const PearlComplex<typename F::value_type>& pc,
                                                   const DegreeBasis<typename F::value_type>& hb,
                                                   const TorsionChoices& ch = {})
{
    using M = Matrix<typename F::value_type>;
    if (auto v = validate_pearl(pc); !v.empty())
        throw InputError("invalid pearl complex: " + v.front(), "pearl");
    const auto a = adapted_basis(field, pc, hb, ch);
    const std::size_t N = pc.total_rank();
    std::array<std::size_t, 4> hoff{}, hdim{};
    std::size_t Nh = 0;
    for (std::size_t k = 0; k < 4; ++k) {
        hoff[k] = Nh;
        hdim[k] = a.H[k].cols();
        Nh += hdim[k];
    }
    M I = zeros(field, N, Nh), P = zeros(field, Nh, N), Hm = zeros(field, N, N);
    for (std::size_t k = 0; k < 4; ++k) {
        const std::size_t off = pc.offset(k);
        I.set_block(off, hoff[k], a.H[k]);
        P.set_block(hoff[k], off, a.Tinv[k].block(0, 0, hdim[k], pc.ranks[k]));
        if (k >= 1) {
            // h = -S_k ∘ (B_{k-1} coordinates) : C_{k-1} -> C_k.
            const std::size_t hk1 = a.H[k - 1].cols(), bk1 = a.B[k - 1].cols();
            const auto bcoord = a.Tinv[k - 1].block(hk1, 0, bk1, pc.ranks[k - 1]);
            Hm.set_block(off, pc.offset(k - 1), -(a.S[k] * bcoord));
        }
    }
    auto Dm = zeros(field, N, N);
    for (long k = 1; k <= 3; ++k)
        Dm.set_block(pc.offset(static_cast<std::size_t>(k - 1)), pc.offset(static_cast<std::size_t>(k)), pc.dM(k));
    const M D = pc.total_differential();
    const M t = D - Dm;
    M A = t, term = t;
    for (std::size_t guard = 0; guard <= N + 1; ++guard) {
        term = t * Hm * term;
        if (term.is_zero())
            break;
        A += term;
    }
    MinimalModel<typename F::value_type> out;
    out.delta = P * A * I;
    out.i = I + Hm * A * I;
    out.p = P + P * A * Hm;
    out.h = Hm + Hm * A * Hm;
    out.D = D;
    out.chain_maps = D * out.i == out.i * out.delta && out.p * D == out.delta * out.p;
    out.retraction = out.p * out.i == identity(field, Nh);
    out.homotopy = out.i * out.p - identity(field, N) == D * out.h + out.h * D;
    out.square_zero = (out.delta * out.delta).is_zero();

    auto& m = out.model;
    m.zero = field.zero();
    m.ranks = hdim;
    for (long k = 1; k <= 3; ++k)
        m.dm[static_cast<std::size_t>(k - 1)] = zeros(field, hdim[k - 1], hdim[k]);
    for (std::size_t k = 0; k < 3; ++k)
        m.d1[k] = out.delta.block(hoff[k + 1], hoff[k], hdim[k + 1], hdim[k]);
    m.d2 = out.delta.block(hoff[3], hoff[0], hdim[3], hdim[0]);
    // δ has no other components: it maps H_k only into H_{k+1} and H_{k+3}.
    M rebuilt = m.total_differential();
    if (!(rebuilt == out.delta))
        throw InternalError("minimal model differential has unexpected components");
    return out;
}

/// Standard basis vectors of each C_k, the homology basis of a complex with d_M = 0.
template <class F>
DegreeBasis<typename F::value_type> standard_homology(const F& field, const PearlComplex<typename F::value_type>& p)
{
    DegreeBasis<typename F::value_type> h;
    for (long k = 0; k <= 3; ++k)
        h.push_back(identity(field, p.rank(k)));
    return h;
}

} // namespace qtorsion
