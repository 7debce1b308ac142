// Acceptance run: one PASS/FAIL line per criterion; exit status 0 iff all pass.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <qtorsion/qtorsion.hpp>

using namespace qtorsion;

namespace {

const RationalField QQ;

struct Outcome
{
    bool pass = true;
    std::string detail;
};

void require(Outcome& o, bool cond, const std::string& what)
{
    if (!cond && o.pass) {
        o.pass = false;
        o.detail = what;
    }
}

/// Calls f(field, spec) for Q, F_3, F_5, F_7 in turn by index.
template <class Fn>
void with_field(std::size_t i, Fn&& f)
{
    static const FieldSpec specs[] = {FieldSpec::rationals(), FieldSpec::prime(3), FieldSpec::prime(5),
                                      FieldSpec::prime(7)};
    const auto& fs = specs[i % 4];
    visit_field(fs, [&](const auto& field) { f(field, fs); });
}

/// A torsion factor from {3,5,7,9} admissible for the field, or none.
template <class F>
std::vector<BigInt> admissible_torsion(const F& field, Rng& rng)
{
    if (rng.chance(1, 2))
        return {};
    const BigInt pool[] = {3, 5, 7, 9};
    for (int tries = 0; tries < 8; ++tries) {
        const BigInt t = pool[rng.below(4)];
        if (!field.is_zero(field.from_integer(t)))
            return {t};
    }
    return {};
}

Surplus random_surplus(Rng& rng, bool births)
{
    if (!births)
        return {0, 0, 0, 0};
    const std::size_t s0 = rng.below(2), s3 = rng.below(2), t = rng.below(3);
    return {s0, s0 + t, s3 + t, s3};
}

template <class F>
GeneratedPearl<typename F::value_type> generate(const F& field, const FieldSpec& fs, int page, std::size_t b,
                                                std::vector<BigInt> torsion, Surplus s, std::uint64_t seed)
{
    GenerateOptions o;
    o.page = page;
    o.b = b;
    o.torsion = std::move(torsion);
    o.surplus = s;
    o.seed = seed;
    return generate_instance(field, fs, o);
}

template <class F>
std::string failing_flags(const VerificationReport<typename F::value_type>& rep)
{
    std::string s;
    for (const auto& f : rep.identities)
        if (!f.pass)
            s += (s.empty() ? "" : ",") + f.name;
    return s;
}

// ---- criteria -------------------------------------------------------------

Outcome ac1()
{
    Outcome o;
    Rng rng(1001);
    const auto start = std::chrono::steady_clock::now();
    auto check = [&](const auto& field, int n) {
        for (int t = 0; t < n; ++t) {
            const auto c = random_acyclic_complex(field, static_cast<std::size_t>(rng.uniform(1, 4)), 6, rng);
            const auto h = empty_homology(field, c.ranks);
            const auto base = milnor_torsion(field, c, h);
            for (int k = 0; k < 3; ++k) {
                Rng r2 = rng.split(static_cast<std::uint64_t>(k));
                require(o, milnor_torsion(field, c, h, TorsionChoices{&r2}) == base, "choice dependence");
            }
        }
    };
    check(QQ, 100);
    check(PrimeField(5), 100);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    require(o, secs < 10.0, "runtime " + std::to_string(secs) + " s");
    if (o.pass)
        o.detail = "200 complexes, 3 random choice sets each, " + std::to_string(secs).substr(0, 4) + " s";
    return o;
}

Outcome ac2()
{
    Outcome o;
    Rng rng(2002);
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = static_cast<std::size_t>(rng.uniform(1, 4));
        std::vector<std::size_t> rho, h;
        for (std::size_t k = 0; k < n; ++k)
            rho.push_back(static_cast<std::size_t>(rng.uniform(0, 2)));
        for (std::size_t k = 0; k <= n; ++k)
            h.push_back(static_cast<std::size_t>(rng.uniform(0, 2)));
        const auto ch = random_split_complex(QQ, rho, h, rng);
        std::vector<Matrix<Rational>> p, r;
        for (std::size_t k = 0; k <= n; ++k) {
            p.push_back(qtorsion::detail::random_invertible(QQ, ch.complex.ranks[k], rng));
            r.push_back(qtorsion::detail::random_invertible(QQ, ch.homology[k].cols(), rng));
        }
        require(o, torsion_basis_change(QQ, ch.complex, ch.homology, p, r).agree, "basis-change law");
    }
    if (o.pass)
        o.detail = "100 complexes";
    return o;
}

Outcome ac3()
{
    Outcome o;
    Rng rng(3003);
    for (std::size_t i = 0; i < 100; ++i)
        with_field(i, [&](const auto& field, const FieldSpec& fs) {
            const auto torsion = admissible_torsion(field, rng);
            const ThreefoldHomology th{static_cast<std::size_t>(rng.uniform(0, 4)), torsion};
            const auto morse = realize_morse(th, random_surplus(rng, rng.chance(1, 2)), rng);
            require(o, morse_torsion_identity(field, morse, fs).agree, "torsion equals torsion");
        });
    const PrimeField F7(7);
    const auto morse = realize_morse({0, {BigInt(5)}}, {0, 0, 0, 0}, rng);
    const auto id = morse_torsion_identity(F7, morse, FieldSpec::prime(7));
    require(o, id.milnor == SignClass(F7.from_int(3)) && id.milnor.str() == "3", "Z/5 over F_7");
    if (o.pass)
        o.detail = "100 Morse complexes; Z/5 over F_7 gives " + id.milnor.str() + " = {3,4}";
    return o;
}

Outcome ac4()
{
    Outcome o;
    Rng rng(4004);
    std::size_t n = 0;
    for (std::size_t i = 0; i < 200; ++i)
        with_field(i, [&](const auto& field, const FieldSpec& fs) {
            const std::size_t b = 1 + 2 * rng.below(3);
            const auto g = generate(field, fs, 2, b, admissible_torsion(field, rng), random_surplus(rng, i % 3 != 0),
                                    rng.split("seed").seed() + i);
            const auto inst = make_instance(field, fs, g);
            const auto rep = verify_main_theorem(field, inst);
            const auto p2 = torsion_via_page2_formula(field, inst);
            require(o, rep.all_pass(), "page-2 flags: " + failing_flags<std::decay_t<decltype(field)>>(rep));
            require(o, *rep.torsion_direct == p2.value && p2.agree, "three torsion paths");
            ++n;
        });
    Rng mrng(44);
    for (long m : {1L, 2L, 3L}) {
        TripleForm vol(3);
        vol.set(0, 1, 2, BigInt(m));
        const auto morse = realize_morse({3, {}}, {0, 0, 0, 0}, mrng);
        const Page2Spec<Rational> spec{{3, {}}, vol, {Rational(1), Rational(0), Rational(0)}};
        const auto g = lift_derivation_page2(QQ, spec, morse, FieldSpec::rationals(), 7);
        const auto tau = quantum_torsion(QQ, g.pearl);
        require(o, tau == SignClass(Rational(1, m * m)), "volume form I(1,2,3)=" + std::to_string(m));
    }
    if (o.pass)
        o.detail = std::to_string(n) + " instances over Q, F3, F5, F7; volume form gives 1, I=m gives 1/m^2";
    return o;
}

Outcome ac5()
{
    Outcome o;
    Rng rng(5005);
    std::size_t n = 0;
    for (std::size_t i = 0; i < 200; ++i)
        with_field(i, [&](const auto& field, const FieldSpec& fs) {
            const std::size_t b = 2 + 2 * rng.below(2);
            const auto g = generate(field, fs, 3, b, admissible_torsion(field, rng), random_surplus(rng, i % 3 != 0),
                                    rng.split("seed").seed() + i);
            const auto rep = verify_main_theorem(field, make_instance(field, fs, g));
            require(o, rep.all_pass(), "page-3 flags: " + failing_flags<std::decay_t<decltype(field)>>(rep));
            require(o, rep.find("power_identity") && rep.find("power_identity")->pass, "power identity");
            ++n;
        });
    // Q' = [[0,2],[-2,0]], r = 2 gives A = [[0,-1],[1,0]].
    Rng mrng(55);
    const auto morse = realize_morse({2, {}}, {0, 0, 0, 0}, mrng);
    const Page3Spec<Rational> spec{{2, {}}, to_field(QQ, int_matrix({{0, 2}, {-2, 0}})), Rational(2)};
    const auto g = lift_derivation_page3(QQ, spec, morse, FieldSpec::rationals(), 3);
    const auto rep = verify_main_theorem(QQ, make_instance(QQ, FieldSpec::rationals(), g));
    require(o, rep.all_pass(), "example flags");
    require(o, *rep.torsion_direct == SignClass(Rational(1, 2)), "tau = 1/2");
    require(o, rep.torsion_direct->pow(2) == SignClass(Rational(1, 4)) &&
                   SignClass(*rep.A_det / *rep.Q_det) == SignClass(Rational(1, 4)),
            "tau^2 = det A / det Q = 1/4");
    if (o.pass)
        o.detail = std::to_string(n) + " instances; example tau = " + rep.torsion_direct->str() + ", tau^2 = 1/4";
    return o;
}

Outcome ac6()
{
    Outcome o;
    Rng rng(6006);
    std::size_t births = 0;
    for (std::size_t i = 0; i < 200; ++i)
        with_field(i, [&](const auto& field, const FieldSpec& fs) {
            const auto s = random_surplus(rng, i % 4 != 0);
            births += s[1] + s[2] > 0;
            const auto g = generate(field, fs, 3, 2 + 2 * rng.below(2), {}, s, rng.split("seed").seed() + i);
            const auto h = qtorsion::detail::field_basis(field, g.basis);
            const auto rate = page2_rate(field, g.pearl, h);
            Rng crng = rng.split("choices");
            const auto cf = closed_form_r(field, g.pearl, adapted_basis(field, g.pearl, h, TorsionChoices{&crng}));
            require(o, SignClass(cf.r) == SignClass(rate), "closed form");
        });
    if (o.pass)
        o.detail = "200 page-3 instances (" + std::to_string(births) + " with birth pairs), random adapted bases";
    return o;
}

Outcome ac7()
{
    Outcome o;
    Rng rng(7007);
    for (std::size_t i = 0; i < 100; ++i)
        with_field(i, [&](const auto& field, const FieldSpec& fs) {
            const int page = i % 2 == 0 ? 2 : 3;
            const std::size_t b = page == 2 ? 1 + 2 * rng.below(3) : 2 + 2 * rng.below(2);
            const auto g = generate(field, fs, page, b, {}, random_surplus(rng, true), rng.split("seed").seed() + i);
            const auto rep = verify_main_theorem(field, make_instance(field, fs, g));
            require(o, rep.find("dichotomy") && rep.find("dichotomy")->pass, "generated dichotomy");
        });
    bool odd_rejected = false;
    try {
        generate(QQ, FieldSpec::rationals(), 3, 3, {}, {0, 0, 0, 0}, 1);
    } catch (const InputError& e) {
        odd_rejected = std::string(e.what()).find("no invertible antisymmetric matrix") != std::string::npos;
    }
    require(o, odd_rejected, "odd b page-3 request");

    // Fuzzing: random pearl complexes obeying the Leibniz rule for a random form over F_3.
    const PrimeField F3(3);
    const auto fs = FieldSpec::prime(3);
    std::size_t narrow2 = 0, narrow3 = 0;
    for (std::uint64_t t = 0; t < 10000; ++t) {
        Rng r = rng.split(t);
        const std::size_t b = 1 + r.below(4);
        TripleForm form(b);
        if (r.chance(1, 2))
            for (std::size_t i = 0; i < b; ++i)
                for (std::size_t j = i + 1; j < b; ++j)
                    for (std::size_t k = j + 1; k < b; ++k)
                        form.set(i, j, k, BigInt(r.uniform(-1, 1)));
        const auto morse = realize_morse({b, {}}, r.chance(1, 4) ? Surplus{0, 1, 1, 0} : Surplus{0, 0, 0, 0}, r);
        RandomPearlOptions opt;
        opt.form = &form;
        const auto g = random_pearl(F3, morse, fs, r.split("pearl").seed(), opt);
        const auto c = collapsing_page(F3, g.pearl);
        if (c == Collapse::NotNarrow)
            continue;
        const auto d = dichotomy_class(F3, form);
        if (c == Collapse::Page2) {
            ++narrow2;
            require(o, d == Dichotomy::SlicedOddB && b % 2 == 1, "fuzz page-2 counterexample");
        } else {
            ++narrow3;
            require(o, d == Dichotomy::ZeroForm && b % 2 == 0, "fuzz page-3 counterexample");
        }
    }
    require(o, narrow2 > 0 && narrow3 > 0, "fuzzing found no narrow instances");
    if (o.pass)
        o.detail = "100 generated; 10000 fuzz trials over F3 (" + std::to_string(narrow2) + " page-2, " +
                   std::to_string(narrow3) + " page-3 narrow), no counterexample";
    return o;
}

Outcome ac8()
{
    Outcome o;
    Rng rng(8008);
    for (int t = 0; t < 200; ++t) {
        const std::size_t b = 1 + rng.below(4);
        DiscSystem d{b, {}};
        const auto n = rng.uniform(0, 6);
        for (std::int64_t k = 0; k < n; ++k) {
            Disc disc{std::vector<std::int64_t>(b), BigInt(rng.uniform(-3, 3))};
            for (auto& x : disc.boundary)
                x = rng.uniform(-2, 2);
            d.discs.push_back(disc);
        }
        std::vector<Rational> z;
        for (std::size_t i = 0; i < b; ++i) {
            Rational x(rng.uniform(1, 5), rng.uniform(1, 4));
            z.push_back(rng.chance(1, 2) ? x : Rational(-x));
        }
        const auto w = build_potential(d);
        const auto dd = d1_from_discs(QQ, d, z);
        const auto g = log_gradient(QQ, w, z);
        for (std::size_t i = 0; i < b; ++i)
            require(o, dd.h2_to_h3(0, i) == g[i], "cross-identity");
        require(o, dd.dual, "duality");
        if (w.is_constant()) {
            for (const auto& x : g)
                require(o, x == 0, "constant gradient");
            require(o, discriminant(QQ, w, z) == 0, "constant discriminant");
        }
    }
    const auto zz = build_potential({1, {{{1}, BigInt(1)}, {{-1}, BigInt(1)}}});
    require(o, discriminant(QQ, zz, {Rational(1)}) == 2, "Delta(1) = 2");
    require(o, discriminant(QQ, zz, {Rational(-1)}) == -2, "Delta(-1) = -2");
    const auto c = LaurentPolynomial::constant(2, BigInt(5));
    for (int t = 0; t < 20; ++t) {
        const std::vector<Rational> z{Rational(rng.uniform(1, 9)), Rational(-rng.uniform(1, 9), 2)};
        require(o, log_gradient(QQ, c, z) == std::vector<Rational>(2, Rational(0)) && discriminant(QQ, c, z) == 0,
                "constant W");
    }
    if (o.pass)
        o.detail = "200 disc systems; Delta = 2 at z = 1, -2 at z = -1; constant W vanishes";
    return o;
}

Outcome ac9()
{
    Outcome o;
    Rng rng(9009);
    for (std::size_t i = 0; i < 100; ++i)
        with_field(i, [&](const auto& field, const FieldSpec& fs) {
            const int page = i % 2 == 0 ? 3 : 2;
            const std::size_t b = page == 2 ? 1 + 2 * rng.below(3) : 2 + 2 * rng.below(2);
            const auto g = generate(field, fs, page, b, admissible_torsion(field, rng), random_surplus(rng, true),
                                    rng.split("seed").seed() + i);
            const auto h = qtorsion::detail::field_basis(field, g.basis);
            const auto mm = minimal_model(field, g.pearl, h);
            require(o, mm.chain_maps && mm.retraction && mm.homotopy && mm.square_zero, "homotopy data");
            const auto hm = standard_homology(field, mm.model);
            const auto one = page1(field, mm.model, hm), orig = page1(field, g.pearl, h);
            for (std::size_t k = 0; k < 3; ++k)
                require(o, one.d1star[k] == orig.d1star[k], "page-1 differential");
            if (page == 3)
                require(o, page2_rate(field, mm.model, hm) == page2_rate(field, g.pearl, h), "page-2 rate");
            const auto ratio = torsion_ratio(field, g.homology.integral());
            require(o, quantum_torsion(field, g.pearl) == quantum_torsion(field, mm.model) * SignClass(ratio),
                    "quantum torsion");
        });
    if (o.pass)
        o.detail = "100 instances (page 2 and 3, Q and F_p)";
    return o;
}

Outcome ac10()
{
    Outcome o;
    Rng rng(10010);
    std::size_t total = 0, detected = 0, genuine = 0;
    for (std::uint64_t t = 0; total < 500; ++t) {
        Rng r = rng.split(t);
        const auto g = generate(QQ, FieldSpec::rationals(), 3, 2 + 2 * r.below(2), {}, {1, 2, 2, 1},
                                r.split("seed").seed());
        auto inst = make_instance(QQ, FieldSpec::rationals(), g);
        Rng m = r.split("corrupt");
        if (!corrupt_d2(inst, m))
            continue;
        ++total;
        if (!verify_main_theorem(QQ, inst).all_pass()) {
            ++detected;
            continue;
        }
        inst.expected = {};
        const bool ok = verify_main_theorem(QQ, inst).all_pass();
        genuine += ok;
        require(o, ok, "undetected mutant does not re-verify");
    }
    require(o, detected * 100 >= total * 95, "detection rate below 95%");
    o.detail = std::to_string(detected) + "/" + std::to_string(total) + " detected, " + std::to_string(genuine) +
               " genuine narrow mutants re-verify";
    return o;
}

} // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"AC1 Milnor torsion well-defined", ac1},    {"AC2 basis-change law", ac2},
        {"AC3 torsion equals torsion", ac3},         {"AC4 page-2 pipeline", ac4},
        {"AC5 page-3 pipeline", ac5},                {"AC6 closed form of the page-2 rate", ac6},
        {"AC7 dichotomy", ac7},                      {"AC8 superpotential identities", ac8},
        {"AC9 minimal-model preservation", ac9},     {"AC10 mutation sensitivity", ac10}};
    bool all = true;
    for (const auto& [name, fn] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s: %s (%s; %.2f s)\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), secs);
        std::fflush(stdout);
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
