#include <catch_amalgamated.hpp>

#include <qtorsion/verifier.hpp>

using namespace qtorsion;

namespace {

const RationalField QQ;

template <class F>
Instance<typename F::value_type> generated(const F& field, const FieldSpec& fs, int page, std::size_t b,
                                          std::vector<BigInt> torsion, Surplus s, std::uint64_t seed)
{
    GenerateOptions o;
    o.page = page;
    o.b = b;
    o.torsion = std::move(torsion);
    o.surplus = s;
    o.seed = seed;
    return make_instance(field, fs, generate_instance(field, fs, o));
}

/// Perfect Morse 3-fold instance with prescribed d1* and d2.
Instance<Rational> perfect(std::size_t b, const TripleForm& form, const Matrix<Rational>& d10,
                           const Matrix<Rational>& A, const Matrix<Rational>& d12, const Rational& r,
                           std::vector<BigInt> torsion = {})
{
    Surplus s{0, 0, 0, 0};
    Rng rng(1);
    const auto morse = realize_morse({b, torsion}, s, rng, false);
    auto p = pearl_from_morse(QQ, morse);
    p.d1 = {d10, A, d12};
    p.d2(0, 0) = r;
    return {{b, torsion}, form, FieldSpec::rationals(), morse, p, std::nullopt, std::nullopt, {}};
}

void require_pass(const VerificationReport<Rational>& rep)
{
    for (const auto& f : rep.identities) {
        INFO(f.name << ": " << f.detail);
        CHECK(f.pass);
    }
}

} // namespace

TEST_CASE("page-3 formula examples")
{
    const auto A = to_field(QQ, int_matrix({{0, -1}, {1, 0}}));
    auto inst = perfect(2, TripleForm(2), zeros(QQ, 2, 1), A, zeros(QQ, 1, 2), Rational(1));
    auto f = torsion_via_page3_formula(QQ, inst);
    CHECK(f.value == SignClass(Rational(1)));
    inst.pearl.d2(0, 0) = 2;
    f = torsion_via_page3_formula(QQ, inst);
    CHECK(f.value == SignClass(Rational(1, 2)));
    CHECK(f.closed_form_agrees);
    const auto rep = verify_main_theorem(QQ, inst);
    require_pass(rep);
    CHECK(rep.collapse == Collapse::Page3);
    CHECK(*rep.torsion_direct == SignClass(Rational(1, 2)));
    CHECK(*rep.Q_det == Rational(4));
    CHECK_THROWS_WITH(torsion_via_page2_formula(QQ, inst), Catch::Matchers::ContainsSubstring(kWrongPage));
}

TEST_CASE("q form examples")
{
    const auto A = to_field(QQ, int_matrix({{0, -1}, {1, 0}}));
    auto q = q_form(QQ, A, Rational(1));
    CHECK(q.Q == to_field(QQ, int_matrix({{0, 1}, {-1, 0}})));
    CHECK(q.det == Rational(1));
    CHECK(q.antisymmetric);
    CHECK(q.det_identity);
    q = q_form(QQ, A, Rational(2));
    CHECK(q.det == Rational(4));
    const auto B = to_field(QQ, int_matrix({{1, 2}, {0, 3}}));
    q = q_form(QQ, B, Rational(5));
    CHECK_FALSE(q.antisymmetric);
    CHECK(q.det_identity);
    CHECK_THROWS_AS(q_form(QQ, zeros(QQ, 2, 2), Rational(1)), InternalError);
}

TEST_CASE("page-2 formula examples")
{
    for (long m : {1L, 3L}) {
        TripleForm vol(3);
        vol.set(0, 1, 2, BigInt(m));
        auto r = zeros(QQ, 3, 1);
        r(0, 0) = 1;
        const auto D = solve_leibniz(QQ, vol, {Rational(1), Rational(0), Rational(0)});
        REQUIRE(D);
        const auto inst = perfect(3, vol, r, *D, r.transpose(), Rational(0));
        const auto f = torsion_via_page2_formula(QQ, inst);
        CHECK(f.value == SignClass(Rational(1, m * m)));
        CHECK(f.agree);
        const auto rep = verify_main_theorem(QQ, inst);
        require_pass(rep);
        CHECK(rep.collapse == Collapse::Page2);
        CHECK(rep.rationally_prime);
    }
}

TEST_CASE("torsion ratio over a prime field")
{
    // Volume form, r = (1,0,0), H_1 = Z/5 over F_7: τ = 1/5 = 3.
    const PrimeField F7(7);
    TripleForm vol(3);
    vol.set(0, 1, 2, BigInt(1));
    Rng rng(9);
    const auto morse = realize_morse({3, {BigInt(5)}}, {0, 1, 1, 0}, rng);
    const Page2Spec<Fp> spec{{3, {BigInt(5)}}, vol, {F7.one(), F7.zero(), F7.zero()}};
    const auto inst = make_instance(F7, FieldSpec::prime(7), lift_derivation_page2(F7, spec, morse, FieldSpec::prime(7), 9));
    const auto rep = verify_main_theorem(F7, inst);
    CHECK(rep.all_pass());
    REQUIRE(rep.torsion_direct);
    CHECK(*rep.torsion_direct == SignClass(F7.from_int(3)));
}

TEST_CASE("two-path torsion on generated instances")
{
    const PrimeField F3(3), F5(5), F7(7);
    for (std::uint64_t seed = 1; seed <= 16; ++seed) {
        const Surplus s{seed % 2, 1 + seed % 3, 1 + seed % 3, seed % 2};
        const std::vector<BigInt> tor = seed % 4 == 0 ? std::vector<BigInt>{BigInt(3)} : std::vector<BigInt>{};
        {
            const auto inst = generated(QQ, FieldSpec::rationals(), 2, seed % 2 == 0 ? 3 : 5, tor, s, seed);
            require_pass(verify_main_theorem(QQ, inst));
        }
        {
            const auto inst = generated(QQ, FieldSpec::rationals(), 3, seed % 2 == 0 ? 2 : 4, tor, s, seed);
            require_pass(verify_main_theorem(QQ, inst));
        }
        {
            const auto inst = generated(F5, FieldSpec::prime(5), 2, 3, tor, s, seed);
            const auto rep = verify_main_theorem(F5, inst);
            CHECK(rep.all_pass());
        }
        {
            const auto inst = generated(F7, FieldSpec::prime(7), 3, 2, {BigInt(5)}, s, seed);
            const auto rep = verify_main_theorem(F7, inst);
            CHECK(rep.all_pass());
        }
        {
            const auto inst = generated(F3, FieldSpec::prime(3), 3, 4, {}, s, seed);
            const auto rep = verify_main_theorem(F3, inst);
            CHECK(rep.all_pass());
        }
    }
}

TEST_CASE("torsion factor multiplies both paths")
{
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const auto a = generated(QQ, FieldSpec::rationals(), 3, 2, {}, {0, 1, 1, 0}, seed);
        const auto b = generated(QQ, FieldSpec::rationals(), 3, 2, {BigInt(7)}, {0, 1, 1, 0}, seed);
        const auto ra = verify_main_theorem(QQ, a), rb = verify_main_theorem(QQ, b);
        REQUIRE(ra.torsion_direct);
        REQUIRE(rb.torsion_direct);
        // Same prescribed data on a different Morse complex: the torsion picks up 1/7.
        CHECK(*rb.torsion_formula == *ra.torsion_formula * SignClass(Rational(1, 7)));
        CHECK(*rb.torsion_direct == *rb.torsion_formula);
    }
}

TEST_CASE("mutations of d2 are detected")
{
    Rng rng(17);
    std::size_t detected = 0, total = 0;
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        auto inst = generated(QQ, FieldSpec::rationals(), 3, 2, {}, {1, 2, 2, 1}, seed);
        if (!corrupt_d2(inst, rng))
            continue;
        ++total;
        const auto rep = verify_main_theorem(QQ, inst);
        if (!rep.all_pass()) {
            ++detected;
            continue;
        }
        // Undetected mutants must be genuine narrow instances.
        inst.expected = {};
        CHECK(verify_main_theorem(QQ, inst).all_pass());
    }
    CHECK(total > 30);
    CHECK(detected * 100 >= total * 95);
}

TEST_CASE("non-narrow and invalid instances")
{
    auto inst = perfect(2, TripleForm(2), zeros(QQ, 2, 1), zeros(QQ, 2, 2), zeros(QQ, 1, 2), Rational(0));
    auto rep = verify_main_theorem(QQ, inst);
    CHECK(rep.collapse == Collapse::NotNarrow);
    CHECK_FALSE(rep.torsion_direct);
    CHECK(rep.all_pass());
    inst.expected.torsion = Rational(1);
    CHECK_FALSE(verify_main_theorem(QQ, inst).all_pass());

    auto bad = perfect(2, TripleForm(2), zeros(QQ, 2, 1), identity(QQ, 2), zeros(QQ, 1, 2), Rational(1));
    bad.pearl.d1[0](0, 0) = 1;
    rep = verify_main_theorem(QQ, bad);
    CHECK_FALSE(rep.all_pass());
    CHECK_FALSE(rep.find("pearl_d_squared")->pass);
}

TEST_CASE("disc data in the report")
{
    auto inst = perfect(2, TripleForm(2), zeros(QQ, 2, 1), to_field(QQ, int_matrix({{0, 1}, {-1, 0}})),
                        zeros(QQ, 1, 2), Rational(1));
    inst.discs = DiscSystem{2, {}};
    inst.representation = std::vector<Rational>{Rational(1), Rational(2)};
    const auto rep = verify_main_theorem(QQ, inst);
    require_pass(rep);
    CHECK(*rep.potential_constant);
    REQUIRE(rep.representation);
    CHECK(rep.representation->is_critical);
}
