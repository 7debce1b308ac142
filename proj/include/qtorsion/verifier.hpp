#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pearl_models.hpp"
#include "superpotential.hpp"

namespace qtorsion {

/// Values an instance was generated to have; the verifier checks the complex against them.
template <class T>
struct Expected
{
    std::optional<T> rate;
    std::optional<T> torsion;
};

/// A pearl complex over a field on an integral Morse complex, with its ring data.
template <class T>
struct Instance
{
    ThreefoldHomology homology;
    TripleForm form;
    FieldSpec field;
    IntegerComplex morse;
    PearlComplex<T> pearl;
    std::optional<DiscSystem> discs;
    std::optional<std::vector<T>> representation;
    Expected<T> expected;
};

struct Flag
{
    std::string name;
    bool pass = false;
    std::string detail;
};

template <class T>
struct VerificationReport
{
    Collapse collapse = Collapse::NotNarrow;
    Dichotomy dichotomy = Dichotomy::ZeroForm;
    std::optional<SignClass<T>> torsion_direct, torsion_formula;
    std::optional<T> A_det, r, Q_det;
    std::vector<Flag> identities;
    bool b_odd = false;
    bool rationally_prime = false; ///< implied by SlicedOddB, never decided independently
    std::optional<bool> potential_constant;
    std::optional<WideNarrowReport<T>> representation;

    void add(std::string name, bool pass, std::string detail = {})
    {
        identities.push_back({std::move(name), pass, std::move(detail)});
    }
    bool all_pass() const
    {
        for (const auto& f : identities)
            if (!f.pass)
                return false;
        return true;
    }
    const Flag* find(const std::string& name) const
    {
        for (const auto& f : identities)
            if (f.name == name)
                return &f;
        return nullptr;
    }
};

/// Wraps a generated pearl as an instance; the expected torsion comes from the prescribed data.
template <class F>
Instance<typename F::value_type> make_instance(const F& field, const FieldSpec& fs,
                                              const GeneratedPearl<typename F::value_type>& g);

namespace detail {

/// Invariant factors > 1 of ⊕ Z/a_i.
inline std::vector<BigInt> invariant_factors(const std::vector<BigInt>& a)
{
    auto m = int_matrix(a.size(), a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        m(i, i) = a[i];
    std::vector<BigInt> out;
    for (const auto& f : smith_normal_form(m).factors())
        if (f > 1)
            out.push_back(f);
    return out;
}

template <class F>
DegreeBasis<typename F::value_type> instance_basis(const F& field, const Instance<typename F::value_type>& inst)
{
    const auto [hom, basis] = integral_homology(inst.morse);
    return field_basis(field, basis);
}

template <class F>
typename F::value_type instance_ratio(const F& field, const Instance<typename F::value_type>& inst)
{
    return torsion_ratio(field, integral_homology(inst.morse).first);
}

/// The E^1 page as a based complex, H_k in chain degree 4 - k so its parity matches the fold.
template <class F>
BasedChainComplex<typename F::value_type> e1_complex(const F& field, const PageOne<typename F::value_type>& one)
{
    BasedChainComplex<typename F::value_type> c{{0, one.ranks[3], one.ranks[2], one.ranks[1], one.ranks[0]},
                                                {},
                                                field.zero()};
    c.d.push_back(zeros(field, 0, one.ranks[3]));
    for (std::size_t k = 3; k-- > 0;)
        c.d.push_back(one.d1star[k]);
    return c;
}

/// r_{i0}^{b-3} / det I(e_{i0},·,·) on the complement of e_{i0}, i0 the first index with r_i ≠ 0.
template <class F>
typename F::value_type page2_formula_core(const F& field, const TripleForm& form,
                                          const std::vector<typename F::value_type>& r)
{
    const std::size_t b = form.b();
    const std::size_t i0 = pivot_index(field, r);
    std::vector<typename F::value_type> v(b, field.zero());
    v[i0] = field.one();
    const auto det = symplectic_slice(field, form, v);
    if (!det)
        throw NotNarrowError("no slice at the pivot of r", "form");
    const long e = static_cast<long>(b) - 3;
    auto p = field.one();
    for (long k = 0; k < (e < 0 ? -e : e); ++k)
        p = e < 0 ? p / r[i0] : p * r[i0];
    return p / *det;
}

template <class T>
std::vector<T> column_vector(const Matrix<T>& m)
{
    std::vector<T> v;
    for (std::size_t i = 0; i < m.rows(); ++i)
        v.push_back(m(i, 0));
    return v;
}

} // namespace detail

inline constexpr const char* kWrongPage = "formula path needs a different collapse page";

template <class T>
struct Page2Formula
{
    SignClass<T> value;     ///< ratio · r_1^{b-3} / det I(e_1,·,·)
    SignClass<T> e1_milnor; ///< ratio · Milnor torsion of the E^1 page
    bool agree;
};

/// The page-2 formula, with the E^1 Milnor torsion as an independent check.
template <class F>
Page2Formula<typename F::value_type> torsion_via_page2_formula(const F& field,
                                                               const Instance<typename F::value_type>& inst)
{
    using T = typename F::value_type;
    if (collapsing_page(field, inst.pearl) != Collapse::Page2)
        throw NotNarrowError(kWrongPage, "page");
    const auto one = page1(field, inst.pearl, detail::instance_basis(field, inst));
    const auto ratio = detail::instance_ratio(field, inst);
    const SignClass<T> formula(ratio * detail::page2_formula_core(field, inst.form, detail::column_vector(one.d1star[0])));
    const auto e1 = detail::e1_complex(field, one);
    const SignClass<T> milnor(ratio * milnor_torsion_value(field, e1, empty_homology(field, e1.ranks)));
    return {formula, milnor, formula == milnor};
}

template <class T>
struct Page3Formula
{
    SignClass<T> value; ///< ratio · det A / r
    T A_det, r, closed_form;
    Matrix<T> A;
    bool closed_form_agrees;
};

template <class F>
Page3Formula<typename F::value_type> torsion_via_page3_formula(const F& field,
                                                               const Instance<typename F::value_type>& inst)
{
    using T = typename F::value_type;
    if (collapsing_page(field, inst.pearl) != Collapse::Page3)
        throw NotNarrowError(kWrongPage, "page");
    const auto h = detail::instance_basis(field, inst);
    const auto one = page1(field, inst.pearl, h);
    const auto r = page2_rate(field, inst.pearl, h);
    const auto cf = closed_form_r(field, inst.pearl, adapted_basis(field, inst.pearl, h));
    const auto detA = determinant(field, one.d1star[1]);
    const SignClass<T> value(detail::instance_ratio(field, inst) * detA / r);
    return {value, detA, r, cf.r, one.d1star[1], SignClass<T>(cf.r) == SignClass<T>(r)};
}

template <class T>
struct QForm
{
    Matrix<T> Q;
    T det;
    bool antisymmetric;
    bool det_identity; ///< det Q = r^b / det A
};

/// Q = r A^{-1}, the unique solution of Q A = r Id.
template <class F>
QForm<typename F::value_type> q_form(const F& field, const Matrix<typename F::value_type>& A,
                                     const typename F::value_type& r)
{
    const auto inv = inverse(field, A);
    if (!inv)
        throw InternalError("A is singular on a page-3 instance");
    QForm<typename F::value_type> q{r * *inv, field.zero(), false, false};
    q.det = determinant(field, q.Q);
    q.antisymmetric = q.Q.transpose() == -q.Q;
    auto rb = field.one();
    for (std::size_t i = 0; i < A.rows(); ++i)
        rb = rb * r;
    q.det_identity = q.det == rb / determinant(field, A);
    return q;
}

namespace detail {

template <class T>
std::string sign_detail(const SignClass<T>& a, const SignClass<T>& b)
{
    return a.str() + " vs " + b.str();
}

} // namespace detail

/// Classifies the instance and checks every identity that applies to its collapse page.
template <class F>
VerificationReport<typename F::value_type> verify_main_theorem(const F& field,
                                                               const Instance<typename F::value_type>& inst)
{
    using T = typename F::value_type;
    VerificationReport<T> rep;
    const std::size_t b = inst.homology.b;
    rep.b_odd = b % 2 == 1;

    const auto [hom, basis] = integral_homology(inst.morse);
    require_admissible(hom, inst.field);
    rep.add("homology", hom.free_rank == std::vector<std::size_t>{1, b, b, 1} &&
                            detail::invariant_factors(hom.factors[1]) == detail::invariant_factors(inst.homology.torsion) && hom.factors[2].empty());
    const auto violations = validate_pearl(inst.pearl);
    rep.add("pearl_d_squared", violations.empty(), violations.empty() ? "" : violations.front());
    rep.add("morse_part", inst.pearl.dm == pearl_from_morse(field, inst.morse).dm);
    if (!rep.all_pass())
        return rep;

    rep.dichotomy = dichotomy_class(field, inst.form);
    rep.rationally_prime = rep.dichotomy == Dichotomy::SlicedOddB;
    rep.collapse = collapsing_page(field, inst.pearl);
    const auto fold = fold_periodic(inst.pearl);
    const bool acyclic = is_acyclic(field, fold);
    rep.add("collapse_vs_acyclicity", acyclic == (rep.collapse != Collapse::NotNarrow));

    const auto h = detail::field_basis(field, basis);
    const auto one = page1(field, inst.pearl, h);
    const HomologyRing ring(field, inst.form);
    if (rep.collapse == Collapse::Page2) {
        const auto failures = ring.leibniz_failures(ring.derivation(one.d1star[0], one.d1star[1], one.d1star[2]));
        rep.add("leibniz", failures.empty(), std::to_string(failures.size()) + " failing pairs");
        rep.add("d1_duality", one.d1star[0] == one.d1star[2].transpose());
    }

    if (acyclic) {
        rep.torsion_direct = periodic_torsion(field, fold);
        if (rep.collapse == Collapse::Page2) {
            rep.add("dichotomy", rep.dichotomy == Dichotomy::SlicedOddB && rep.b_odd, dichotomy_name(rep.dichotomy));
            try {
                const auto p2 = torsion_via_page2_formula(field, inst);
                rep.torsion_formula = p2.value;
                rep.r = detail::column_vector(one.d1star[0])[pivot_index(field, detail::column_vector(one.d1star[0]))];
                rep.add("e1_milnor", p2.agree, detail::sign_detail(p2.value, p2.e1_milnor));
            } catch (const NotNarrowError& e) {
                rep.add("page2_formula", false, e.what());
            }
        } else {
            rep.add("dichotomy", rep.dichotomy == Dichotomy::ZeroForm && !rep.b_odd, dichotomy_name(rep.dichotomy));
            const auto p3 = torsion_via_page3_formula(field, inst);
            rep.torsion_formula = p3.value;
            rep.A_det = p3.A_det;
            rep.r = p3.r;
            rep.add("closed_form_r", p3.closed_form_agrees);
            const auto q = q_form(field, p3.A, p3.r);
            rep.Q_det = q.det;
            rep.add("q_antisymmetric", q.antisymmetric);
            rep.add("q_det", q.det_identity);
            // τ^b = ratio^b det A^{b-1} / det Q.
            const auto ratio = torsion_ratio(field, hom);
            const SignClass<T> rhs(scalar_pow(ratio, static_cast<long>(b)) *
                                   scalar_pow(p3.A_det, static_cast<long>(b) - 1) / q.det);
            rep.add("power_identity", rep.torsion_direct->pow(static_cast<long>(b)) == rhs);
            if (inst.expected.rate)
                rep.add("expected_rate", SignClass<T>(*inst.expected.rate) == SignClass<T>(p3.r));
        }
        if (rep.torsion_formula)
            rep.add("two_path_torsion", *rep.torsion_direct == *rep.torsion_formula,
                    detail::sign_detail(*rep.torsion_direct, *rep.torsion_formula));
        if (inst.expected.torsion)
            rep.add("expected_torsion", *rep.torsion_direct == SignClass<T>(*inst.expected.torsion),
                    detail::sign_detail(*rep.torsion_direct, SignClass<T>(*inst.expected.torsion)));
    } else if (inst.expected.torsion || inst.expected.rate) {
        rep.add("expected_narrow", false, kNotNarrow);
    }

    if (inst.discs) {
        const auto w = build_potential(*inst.discs);
        rep.potential_constant = w.is_constant();
        if (inst.representation) {
            rep.representation = classify_representation(field, *inst.discs, *inst.representation, rep.collapse);
            rep.add("representation", rep.representation->consistent, rep.representation->note);
            const auto dd = d1_from_discs(field, *inst.discs, *inst.representation);
            rep.add("disc_duality", dd.dual);
        }
    }
    return rep;
}

template <class F>
Instance<typename F::value_type> make_instance(const F& field, const FieldSpec& fs,
                                              const GeneratedPearl<typename F::value_type>& g)
{
    using T = typename F::value_type;
    Instance<T> inst{g.homology, g.form, fs, g.morse, g.pearl, std::nullopt, std::nullopt, {}};
    const auto ratio = torsion_ratio(field, g.homology.integral());
    if (g.page == 2) {
        inst.expected.torsion = ratio * detail::page2_formula_core(field, g.form, detail::column_vector(g.d1star[0]));
    } else if (g.page == 3) {
        inst.expected.rate = g.rate;
        inst.expected.torsion = ratio * determinant(field, g.d1star[1]) / *g.rate;
    }
    return inst;
}

/**
 * Mutation: negate one nonzero entry of d2, chosen uniformly. Returns false
 * when d2 has no nonzero entry.
 */
template <class T>
bool corrupt_d2(Instance<T>& inst, Rng& rng)
{
    std::vector<std::pair<std::size_t, std::size_t>> nz;
    for (std::size_t i = 0; i < inst.pearl.d2.rows(); ++i)
        for (std::size_t j = 0; j < inst.pearl.d2.cols(); ++j)
            if (!is_zero_scalar(inst.pearl.d2(i, j)))
                nz.emplace_back(i, j);
    if (nz.empty())
        return false;
    const auto [i, j] = nz[rng.below(nz.size())];
    inst.pearl.d2(i, j) = -inst.pearl.d2(i, j);
    return true;
}

} // namespace qtorsion
